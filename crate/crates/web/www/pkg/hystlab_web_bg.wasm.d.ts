/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_loopview_free: (a: number, b: number) => void;
export const field_loop: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const loopview_area: (a: number) => number;
export const loopview_closure_gap: (a: number) => number;
export const loopview_normalized_area: (a: number) => number;
export const loopview_u: (a: number) => [number, number];
export const loopview_y: (a: number) => [number, number];
export const spectrum: (a: number, b: number, c: number) => [number, number, number, number];
export const spring_loop: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
