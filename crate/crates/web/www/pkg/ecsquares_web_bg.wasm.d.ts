/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const sequence: (a: bigint, b: bigint, c: number, d: number) => [number, number, number, number];
export const trace_landscape: (a: bigint) => [number, number, number, number];
export const verify_extension: (a: bigint, b: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
