import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        include: ["tests/**/*.test.ts"],
        globalSetup: ["tests/service-setup.ts"],
        testTimeout: 30000,
        hookTimeout: 60000,
        pool: "threads",
    },
});
