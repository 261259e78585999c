import { createHash } from 'node:crypto';

export const MAX_SEED = (1n << 64n) - 1n;

export type SeedLike = number | bigint;

export function toSeed(value: SeedLike): bigint {
  const seed = typeof value === 'bigint' ? value : BigInt(value);
  if (seed < 0n || seed > MAX_SEED) {
    throw new RangeError(`seed must be in [0, 2^64), got ${value}`);
  }
  return seed;
}

/**
 * Stable 64-bit seed from string-able parts: SHA-256 over the parts joined
 * with ":", first 8 bytes read big-endian. The corruption CLI derives its
 * per-sample seeds with the same recipe, so derived seeds here reproduce
 * the files a batch generation run writes.
 */
export function deriveSeed(...parts: Array<string | number | bigint>): bigint {
  const digest = createHash('sha256')
    .update(parts.map(String).join(':'), 'utf8')
    .digest();
  return digest.readBigUInt64BE(0);
}

/**
 * How a transform handle picks the seed for each call.
 *
 * - fixed: every call uses the same seed.
 * - counter: calls use start, start+1, ... (wrapping at 2^64), so repeated
 *   transforms of one sample differ while the sequence stays reproducible.
 * - derived: the seed is hashed from (runSeed, sampleId, kind, severity),
 *   matching the batch generator; callers must pass a sampleId.
 */
export type SeedPolicy =
  | { policy: 'fixed'; seed: SeedLike }
  | { policy: 'counter'; start?: SeedLike }
  | { policy: 'derived'; runSeed?: SeedLike };

export interface SeedSource {
  next(sampleId?: string): bigint;
}

export function makeSeedSource(
  policy: SeedPolicy,
  kind: string,
  severity: number,
): SeedSource {
  switch (policy.policy) {
    case 'fixed': {
      const seed = toSeed(policy.seed);
      return { next: () => seed };
    }
    case 'counter': {
      let counter = toSeed(policy.start ?? 0);
      return {
        next: () => {
          const seed = counter;
          counter = (counter + 1n) & MAX_SEED;
          return seed;
        },
      };
    }
    case 'derived': {
      const runSeed = toSeed(policy.runSeed ?? 0);
      return {
        next: (sampleId?: string) => {
          if (sampleId === undefined) {
            throw new TypeError(
              'derived seed policy needs a sampleId on every transform call',
            );
          }
          return deriveSeed(runSeed, sampleId, kind, severity);
        },
      };
    }
  }
}
