/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_constants_free: (a: number, b: number) => void;
export const __wbg_get_constants_bracket_high: (a: number) => number;
export const __wbg_get_constants_bracket_low: (a: number) => number;
export const __wbg_get_constants_perimeter: (a: number) => number;
export const __wbg_get_constants_second_term: (a: number) => number;
export const __wbg_get_constants_sqrt_coefficient: (a: number) => number;
export const __wbg_get_constants_third_term: (a: number) => number;
export const __wbg_get_constants_third_term_exact: (a: number) => number;
export const __wbg_get_constants_volume: (a: number) => number;
export const __wbg_series_free: (a: number, b: number) => void;
export const __wbg_set_constants_bracket_high: (a: number, b: number) => void;
export const __wbg_set_constants_bracket_low: (a: number, b: number) => void;
export const __wbg_set_constants_perimeter: (a: number, b: number) => void;
export const __wbg_set_constants_second_term: (a: number, b: number) => void;
export const __wbg_set_constants_sqrt_coefficient: (a: number, b: number) => void;
export const __wbg_set_constants_third_term: (a: number, b: number) => void;
export const __wbg_set_constants_third_term_exact: (a: number, b: number) => void;
export const __wbg_set_constants_volume: (a: number, b: number) => void;
export const constants: (a: number, b: number, c: number) => [number, number, number];
export const density_series: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const heat_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const series_column: (a: number, b: number) => [number, number];
export const series_width: (a: number) => number;
export const series_xs: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
