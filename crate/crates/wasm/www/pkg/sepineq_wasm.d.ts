/* tslint:disable */
/* eslint-disable */

/**
 * Reference-pair value, seeded detector and the four reference criteria
 * for one family member.
 */
export function detect(family_name: string, param: number): string;

/**
 * Finite-shot estimate under the family's reference pair, or the seeded
 * pair when `seeded` is true.
 */
export function measure(family_name: string, param: number, shots: number, seed: number, seeded: boolean): string;

/**
 * `F` for `σ_b` under `U = cos t I + sin t (|0⟩⟨1| − |1⟩⟨0|)`, `V = I_4`,
 * on a `t_steps × b_steps` grid over `t ∈ [0, π]`, `b ∈ [0, 1]`, row-major
 * in `t`.
 */
export function rotation_heatmap(b_steps: number, t_steps: number): Float64Array;

/**
 * Scan rows for `isotropic23` or `sigma-b` under the family's reference
 * pair, as a JSON array.
 */
export function scan_curve(family_name: string, start: number, stop: number, step: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly detect: (a: number, b: number, c: number) => [number, number, number, number];
    readonly measure: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly rotation_heatmap: (a: number, b: number) => [number, number, number, number];
    readonly scan_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
