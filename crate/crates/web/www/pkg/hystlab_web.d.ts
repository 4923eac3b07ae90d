/* tslint:disable */
/* eslint-disable */

/**
 * The analysed period of a run, in `(u, y)` coordinates.
 */
export class LoopView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly area: number;
    readonly closure_gap: number;
    readonly normalized_area: number;
    readonly u: Float64Array;
    readonly y: Float64Array;
}

/**
 * Loop of the probed field component for the nonlinear or linearized model
 * started from the uniform state `(1, 0, 0)`.
 */
export function field_loop(linear: boolean, nu: number, nodes: number, omega: number, amplitude: number): LoopView;

/**
 * Rows of `[mode, re_analytic, im_analytic, re_numeric, im_numeric, abs_error]`, flattened.
 */
export function spectrum(nu: number, nodes: number, max_mode: number): Float64Array;

/**
 * `system` is `linear-spring`, `nonlinear-spring` or `integrator-chain`.
 */
export function spring_loop(system: string, c: number, k: number, omega: number, amplitude: number): LoopView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_loopview_free: (a: number, b: number) => void;
    readonly field_loop: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly loopview_area: (a: number) => number;
    readonly loopview_closure_gap: (a: number) => number;
    readonly loopview_normalized_area: (a: number) => number;
    readonly loopview_u: (a: number) => [number, number];
    readonly loopview_y: (a: number) => [number, number];
    readonly spectrum: (a: number, b: number, c: number) => [number, number, number, number];
    readonly spring_loop: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
