/* tslint:disable */
/* eslint-disable */

/**
 * Candidate-set sizes per step for PELT and FPOP on the same data.
 */
export function candidate_counts(values: Float64Array, beta: number): string;

/**
 * FPOP's piecewise-quadratic cost over μ after `t` points.
 */
export function cost_snapshot(values: Float64Array, beta: number, t: number): string;

/**
 * Runs one solver; returns the same report as the command line.
 */
export function segment(values: Float64Array, method: string, beta: number, kmax: number): string;

/**
 * Simulated series with alternating means; `{values, changepoints}`.
 */
export function simulate(n: number, changes: number, jump: number, seed: number, random: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly candidate_counts: (a: number, b: number, c: number) => [number, number, number, number];
    readonly cost_snapshot: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly segment: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly simulate: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
