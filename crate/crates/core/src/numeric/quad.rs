//! Globally adaptive Gauss–Kronrod (7, 15) integration on a finite interval.

#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let (f1, f2) = (f(c - h * x), f(c + h * x));
        kronrod += w * (f1 + f2);
        if k % 2 == 1 {
            gauss += WG[k / 2] * (f1 + f2);
        }
    }
    let value = kronrod * h;
    let error = libm::fabs((kronrod - gauss) * h);
    Segment { a, b, value, error }
}

/// `∫_a^b f` to within `max(abs_tol, rel_tol·|I|)`, bisecting the worst
/// segment at most `max_subdivisions` times.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<f64> {
    let mut segments: Vec<Segment> = alloc::vec![gk15(&f, a, b)];
    for _ in 0..=max_subdivisions {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::NonConvergent);
        }
        if error <= abs_tol.max(rel_tol * libm::fabs(total)) {
            return Ok(total);
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(gk15(&f, s.a, mid));
        segments.push(gk15(&f, mid, s.b));
    }
    Err(Error::NonConvergent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, 1e-12, 10).unwrap();
        assert!((v - 0.0).abs() < 1e-14);
        let v = integrate(|x| libm::pow(x, 10.0), 0.0, 1.0, 1e-14, 1e-14, 10).unwrap();
        assert!((v - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_and_decaying() {
        let v = integrate(|x| libm::exp(-x) * libm::sin(5.0 * x), 0.0, 40.0, 1e-12, 1e-12, 2000).unwrap();
        assert!((v - 5.0 / 26.0).abs() < 1e-10);
    }

    #[test]
    fn integrable_singularity() {
        let v = integrate(|x| 1.0 / libm::sqrt(x), 0.0, 1.0, 1e-8, 1e-8, 2000).unwrap();
        assert!((v - 2.0).abs() < 1e-7);
    }

    #[test]
    fn subdivision_limit() {
        assert_eq!(integrate(|x| 1.0 / x, 0.0, 1.0, 1e-12, 1e-12, 20), Err(Error::NonConvergent));
    }
}
