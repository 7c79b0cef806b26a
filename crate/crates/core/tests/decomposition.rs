// SPDX-License-Identifier: MIT OR Apache-2.0

use msi_core::arith::{GSpec, SupportCutoff};
use msi_core::farey::{farey_enumerate, min_gap};
use msi_core::integral::{
    far_part_bound_check, majorant_compare, selberg_integral_decomposed, selberg_integral_decomposed_with,
    DecompositionOptions, IntegralConfig,
};
use msi_core::verify::FAR_PART_CONSTANT;
use msi_core::Execution;

fn fixed(n: usize, h: usize, q: usize, g: GSpec) -> IntegralConfig {
    IntegralConfig::new(n, h, SupportCutoff::Fixed(q), g).unwrap()
}

#[test]
fn delta_has_no_parts() {
    let r = selberg_integral_decomposed(&fixed(40, 4, 9, GSpec::Delta1)).unwrap();
    assert_eq!(
        [
            r.diagonal,
            r.near_delta,
            r.near_sigma,
            r.far_delta,
            r.far_sigma,
            r.total,
            r.direct
        ],
        [0.0; 7]
    );
}

#[test]
fn mobius_thirty_reconstructs() {
    let r = selberg_integral_decomposed(&fixed(30, 2, 5, GSpec::Mobius)).unwrap();
    assert!(r.abs_gap <= 1e-8 * (1.0 + r.direct));
    assert!(r.direct > 0.0);
}

#[test]
fn far_part_within_frozen_constant() {
    let cfg = fixed(30, 2, 5, GSpec::Mobius).with_spacing(30.0).unwrap();
    let report = far_part_bound_check(&cfg).unwrap();
    assert!(report.far_abs <= FAR_PART_CONSTANT * report.a_h);
}

#[test]
fn far_parts_vanish_when_every_key_is_near() {
    // every δ and σ lies in (0, 1/2]
    for g in [GSpec::Mobius, GSpec::Unit, GSpec::Random(4)] {
        let cfg = fixed(120, 6, 11, g).with_spacing(2.0).unwrap();
        let r = selberg_integral_decomposed(&cfg).unwrap();
        assert_eq!((r.far_delta, r.far_sigma), (0.0, 0.0));
        assert!(r.abs_gap <= 1e-8 * (1.0 + r.direct));
    }
}

#[test]
fn near_differences_vanish_past_the_minimal_gap() {
    let q = 11;
    let gap = min_gap(&farey_enumerate(q as u64).unwrap()).unwrap();
    let a = 2.0 * *gap.denom() as f64 / *gap.numer() as f64;
    for g in [GSpec::Mobius, GSpec::Unit, GSpec::Random(4)] {
        let cfg = fixed(120, 6, q, g).with_spacing(a).unwrap();
        let r = selberg_integral_decomposed(&cfg).unwrap();
        assert_eq!(r.near_delta, 0.0);
        assert!(r.abs_gap <= 1e-8 * (1.0 + r.direct));
    }
}

#[test]
fn near_parts_and_diagonal_are_nonnegative_at_eight_n() {
    for g in [GSpec::Mobius, GSpec::Unit, GSpec::Random(11)] {
        for (n, q) in [(16, 20), (40, 30), (100, 30)] {
            let cfg = fixed(n, 4, q, g).with_spacing(8.0 * n as f64).unwrap();
            let r = selberg_integral_decomposed(&cfg).unwrap();
            assert!(r.near_delta + r.near_sigma + r.diagonal >= 0.0, "{g} N={n}: {r:?}");
        }
    }
}

#[test]
fn execution_modes_agree_bitwise() {
    let cfg = fixed(500, 8, 40, GSpec::Random(2));
    let run = |exec| {
        selberg_integral_decomposed_with(
            &cfg,
            &DecompositionOptions {
                exec,
                ..DecompositionOptions::default()
            },
        )
        .unwrap()
    };
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
}

#[test]
fn equal_functions_give_ratio_below_one() {
    for g in [GSpec::MobiusSquared, GSpec::Unit] {
        let r = majorant_compare(&fixed(1000, 12, 8, g), g).unwrap();
        assert_eq!(r.j_f, r.j_big_f);
        assert!(r.ratio <= 1.0);
    }
}

#[test]
fn random_against_unit_reports() {
    let r = majorant_compare(&fixed(2000, 16, 10, GSpec::Random(21)), GSpec::Unit).unwrap();
    assert!(r.ratio.is_finite() && r.ratio >= 0.0);
}

#[test]
fn majorant_violation_names_the_index() {
    let err = majorant_compare(&fixed(100, 4, 6, GSpec::Unit), GSpec::Mobius).unwrap_err();
    assert!(err.to_string().contains("g(2)"), "{err}");
}
