/* tslint:disable */
/* eslint-disable */

export class Constants {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    bracket_high: number;
    /**
     * Ball bracket for the third-term constant; NaN for intervals.
     */
    bracket_low: number;
    perimeter: number;
    /**
     * Second-term constant of the two-term law.
     */
    second_term: number;
    sqrt_coefficient: number;
    third_term_exact: number;
    /**
     * Third-term constant; NaN outside `1 < alpha < 2`.
     */
    third_term: number;
    volume: number;
}

/**
 * Abscissae with one or more value columns.
 */
export class Series {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    column(i: number): Float64Array;
    readonly width: number;
    readonly xs: Float64Array;
}

export function constants(domain: string, alpha: number): Constants;

export function density_series(alpha: number, t: number, x_min: number, x_max: number, points: number): Series;

export function heat_curves(domain: string, alpha: number, t_max: number, t_min: number, points: number): Series;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_constants_free: (a: number, b: number) => void;
    readonly __wbg_get_constants_bracket_high: (a: number) => number;
    readonly __wbg_get_constants_bracket_low: (a: number) => number;
    readonly __wbg_get_constants_perimeter: (a: number) => number;
    readonly __wbg_get_constants_second_term: (a: number) => number;
    readonly __wbg_get_constants_sqrt_coefficient: (a: number) => number;
    readonly __wbg_get_constants_third_term: (a: number) => number;
    readonly __wbg_get_constants_third_term_exact: (a: number) => number;
    readonly __wbg_get_constants_volume: (a: number) => number;
    readonly __wbg_series_free: (a: number, b: number) => void;
    readonly __wbg_set_constants_bracket_high: (a: number, b: number) => void;
    readonly __wbg_set_constants_bracket_low: (a: number, b: number) => void;
    readonly __wbg_set_constants_perimeter: (a: number, b: number) => void;
    readonly __wbg_set_constants_second_term: (a: number, b: number) => void;
    readonly __wbg_set_constants_sqrt_coefficient: (a: number, b: number) => void;
    readonly __wbg_set_constants_third_term: (a: number, b: number) => void;
    readonly __wbg_set_constants_third_term_exact: (a: number, b: number) => void;
    readonly __wbg_set_constants_volume: (a: number, b: number) => void;
    readonly constants: (a: number, b: number, c: number) => [number, number, number];
    readonly density_series: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly heat_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly series_column: (a: number, b: number) => [number, number];
    readonly series_width: (a: number) => number;
    readonly series_xs: (a: number) => [number, number];
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
