/* tslint:disable */
/* eslint-disable */

/**
 * Completes an ordered multigraph given as an edge list (`a b` or `a b m`
 * per line, vertices `1..=s`) against lie budget `k`.
 */
export function complete_graph(s: number, edge_list: string, k: number): string;

/**
 * One seeded min-max run. `oracle` is `truthful`, `random-liar` (lying
 * with probability `p`) or `triggered-liar` (lying at the comma-separated
 * `triggers`). `group_size` 0 keeps the default.
 */
export function run_minmax(algorithm: string, n: number, k: number, oracle: string, p: number, triggers: string, seed: number, group_size: number): string;

/**
 * Sorts a seeded random permutation of size `s` and reports its sort
 * graph with the per-vertex span profile.
 */
export function sort_profile(sorter: string, s: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly complete_graph: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly run_minmax: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number) => [number, number, number, number];
    readonly sort_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
