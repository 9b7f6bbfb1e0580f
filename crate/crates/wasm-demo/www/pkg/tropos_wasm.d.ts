/* tslint:disable */
/* eslint-disable */

/**
 * Cone of the potentials (one per line) and, if `f` is nonempty, whether
 * f^t < 0 on it. Two-variable cones also return their rows as floats.
 */
export function cone(potentials: string, f: string): string;

/**
 * Scaling curves for SL_2: log sup-deviation against s at sampled cone
 * points, plus the outside-cone control.
 */
export function scaling(points: number, seed: number, smax: number): string;

/**
 * Tropicalize one expression per line. For one variable the graph is sampled
 * on [lo, hi].
 */
export function trop(exprs: string, lo: number, hi: number, samples: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cone: (a: number, b: number, c: number, d: number) => [number, number];
    readonly scaling: (a: number, b: number, c: number) => [number, number];
    readonly trop: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
