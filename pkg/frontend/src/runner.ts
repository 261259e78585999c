import { execFile } from 'node:child_process';
import { mkdtemp, readFile, rm, writeFile } from 'node:fs/promises';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

/**
 * The corruption engine is consumed strictly through its command line
 * interface; PATHOBENCH_CLI overrides the executable looked up on PATH.
 */
export function cliCommand(): string {
  return process.env.PATHOBENCH_CLI ?? 'pathobench';
}

export function runCli(args: string[]): Promise<string> {
  return new Promise((resolve, reject) => {
    execFile(cliCommand(), args, { maxBuffer: 64 * 1024 * 1024 }, (err, stdout, stderr) => {
      if (err) {
        const detail = stderr.trim().split('\n').slice(-3).join('\n');
        reject(new Error(`${cliCommand()} ${args[0]} failed: ${detail || err.message}`));
        return;
      }
      resolve(stdout);
    });
  });
}

/** Run fn with a private scratch directory that is removed afterwards. */
export async function withScratchDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), 'pathobench-'));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

export async function corruptFile(
  inputPng: Buffer,
  kind: string,
  severity: number,
  seed: bigint,
): Promise<Buffer> {
  return withScratchDir(async (dir) => {
    const inPath = join(dir, 'in.png');
    const outPath = join(dir, 'out.png');
    await writeFile(inPath, inputPng);
    await runCli([
      'corrupt', inPath,
      '--kind', kind,
      '--severity', String(severity),
      '--seed', seed.toString(),
      '--out', outPath,
    ]);
    return readFile(outPath);
  });
}
