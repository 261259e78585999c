import { defineConfig } from 'vitest/config';

// The equivalence suite shells out to the corruption CLI hundreds of times,
// so individual tests get a generous budget.
export default defineConfig({
  test: {
    testTimeout: 180_000,
    hookTimeout: 60_000,
  },
});
