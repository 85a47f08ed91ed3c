//! Adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

fn kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(c);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = h * T::lit(XGK[i]);
        let s = f(c - dx) + f(c + dx);
        k += s * T::lit(WGK[i]);
        if i % 2 == 1 {
            g += s * T::lit(WG[i / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T, whole: T, depth: u32) -> T {
    let (val, err) = kronrod(f, a, b);
    let floor = T::epsilon() * T::lit(50.0) * whole.abs().max(val.abs());
    if err <= tol.max(floor) || depth >= MAX_DEPTH {
        return val;
    }
    let mid = (a + b) * T::lit(0.5);
    let half_tol = tol * T::lit(0.5);
    adapt(f, a, mid, half_tol, whole, depth + 1) + adapt(f, mid, b, half_tol, whole, depth + 1)
}

/// Integrates `f` over `[a, b]` to an absolute tolerance `tol`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> T {
    let (whole, _) = kronrod(&f, a, b);
    adapt(&f, a, b, tol, whole, 0)
}
