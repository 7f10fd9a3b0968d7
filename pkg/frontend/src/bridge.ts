/**
 * Client for the toolkit's stdio bridge (`pmt bridge`): one JSON request per
 * line in, one JSON response per line out, matched by id.  A single shared
 * child process serves the whole Node process; it is spawned lazily and
 * reused so per-call overhead is a pipe round trip, not an interpreter start.
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import { createInterface, type Interface } from "node:readline";
import type { Readable, Writable } from "node:stream";

import { PmtError } from "./types.js";

interface Pending {
  resolve: (value: Record<string, unknown>) => void;
  reject: (error: Error) => void;
}

export class Bridge {
  private child: ChildProcessByStdio<Writable, Readable, null>;
  private lines: Interface;
  private pending = new Map<number, Pending>();
  private nextId = 1;
  private closed = false;

  constructor(command?: string[]) {
    const argv = command ?? defaultCommand();
    this.child = spawn(argv[0], argv.slice(1), {
      stdio: ["pipe", "pipe", "inherit"],
    });
    this.lines = createInterface({ input: this.child.stdout });
    this.lines.on("line", (line) => this.onLine(line));
    this.child.on("exit", () => this.failAllPending("bridge process exited"));
    this.child.on("error", (err) => this.failAllPending(`bridge spawn failed: ${err.message}`));
  }

  request(op: string, fields: Record<string, unknown> = {}): Promise<Record<string, unknown>> {
    if (this.closed) {
      return Promise.reject(new PmtError("BridgeClosed", "bridge already closed"));
    }
    const id = this.nextId++;
    const payload = JSON.stringify({ id, op, ...fields });
    return new Promise((resolve, reject) => {
      this.pending.set(id, { resolve, reject });
      this.child.stdin.write(payload + "\n", (err) => {
        if (err) {
          this.pending.delete(id);
          reject(new PmtError("BridgeWriteFailed", err.message));
        }
      });
    });
  }

  async close(): Promise<void> {
    if (this.closed) return;
    this.closed = true;
    try {
      await this.request0("shutdown");
    } catch {
      // already gone
    }
    this.child.stdin.end();
  }

  private request0(op: string): Promise<Record<string, unknown>> {
    const id = this.nextId++;
    return new Promise((resolve, reject) => {
      this.pending.set(id, { resolve, reject });
      this.child.stdin.write(JSON.stringify({ id, op }) + "\n", (err) => {
        if (err) reject(new PmtError("BridgeWriteFailed", err.message));
      });
    });
  }

  private onLine(line: string): void {
    let response: {
      id: number;
      ok: boolean;
      error?: { type: string; message: string };
    } & Record<string, unknown>;
    try {
      response = JSON.parse(line);
    } catch {
      return;
    }
    const pending = this.pending.get(response.id);
    if (!pending) return;
    this.pending.delete(response.id);
    if (response.ok) {
      pending.resolve(response);
    } else {
      const error = response.error ?? { type: "PmtError", message: "unknown bridge error" };
      pending.reject(new PmtError(error.type, error.message));
    }
  }

  private failAllPending(message: string): void {
    for (const pending of this.pending.values()) {
      pending.reject(new PmtError("BridgeClosed", message));
    }
    this.pending.clear();
  }
}

function defaultCommand(): string[] {
  const env = process.env.PMT_BRIDGE_COMMAND;
  if (env && env.trim()) return env.trim().split(/\s+/);
  return ["python3", "-m", "pmt", "bridge"];
}

let sharedBridge: Bridge | undefined;

/** The lazily spawned process-wide bridge. */
export function bridge(): Bridge {
  sharedBridge ??= new Bridge();
  return sharedBridge;
}

/** Stop the shared bridge (mainly for test teardown). */
export async function closeBridge(): Promise<void> {
  if (sharedBridge) {
    await sharedBridge.close();
    sharedBridge = undefined;
  }
}
