export { rgbImage, validateImage, encodePng, decodePng, imagesEqual } from './image.js';
export type { RgbImage } from './image.js';
export { deriveSeed, toSeed, makeSeedSource, MAX_SEED } from './seed.js';
export type { SeedPolicy, SeedLike, SeedSource } from './seed.js';
export { cliCommand, runCli, withScratchDir, corruptFile } from './runner.js';
export { Corrupt, CORRUPTION_KINDS, severityTable } from './transform.js';
export type { CorruptionKind, SeverityTableConfig, TransformHandle } from './transform.js';
