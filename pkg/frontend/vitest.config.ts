import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node", // DOM suites opt into jsdom per file
    testTimeout: 60000,
    hookTimeout: 60000,
    // The live-service suites each spawn their own server process;
    // keep files sequential so ports and sessions stay isolated.
    fileParallelism: false,
  },
});
