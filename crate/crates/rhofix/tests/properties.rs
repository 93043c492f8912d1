//! Property tests for the structural invariants the library promises.

use proptest::prelude::*;
use rhofix::contraction::{
    certify_strict, certify_strong, corollary_reduction, ratio_scan_on_pairs,
    sample_certification_pairs, solve_strong, SolveMode, StrongContractionCertificate,
};
use rhofix::mapping::DomainDescriptor;
use rhofix::modular::{
    estimate_delta2, growth_function_estimate, Element, ModularEntry, ModularFunctional,
    OrliczGenerator, ABS_TOL,
};
use rhofix::problems::{
    make_affine_map, make_rotation_map, make_volterra_operator, AffineMapSpec, ForcingSpec,
    KernelSpec, NonlinearitySpec, VolterraSpec,
};
use rhofix::Mapping;
use std::sync::Arc;

fn mixed_modular(p1: f64, p2: f64, w1: f64, w2: f64) -> ModularFunctional {
    ModularFunctional::new(vec![
        ModularEntry {
            weight: w1,
            generator: OrliczGenerator::power(p1).unwrap(),
        },
        ModularEntry {
            weight: w2,
            generator: OrliczGenerator::power(p2).unwrap(),
        },
    ])
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // ρ(t·x) is non-decreasing in t ≥ 0, on mixed power modulars.
    #[test]
    fn scalar_monotonicity(
        p1 in 0.3f64..3.0,
        p2 in 0.3f64..3.0,
        w1 in 0.1f64..5.0,
        w2 in 0.1f64..5.0,
        x1 in -10.0f64..10.0,
        x2 in -10.0f64..10.0,
        t1 in 0.0f64..4.0,
        t2 in 0.0f64..4.0,
    ) {
        let rho = mixed_modular(p1, p2, w1, w2);
        let x = Element::new(vec![x1, x2]);
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let v_lo = rho.evaluate(&x.scale(lo)).unwrap();
        let v_hi = rho.evaluate(&x.scale(hi)).unwrap();
        prop_assert!(v_lo <= v_hi * (1.0 + 1e-9) + ABS_TOL);
    }

    // Power modulars are positively homogeneous of degree p to 1e−12
    // relative accuracy.
    #[test]
    fn power_homogeneity(
        p in 0.3f64..3.0,
        t in 0.0f64..5.0,
        coords in prop::collection::vec(-20.0f64..20.0, 1..6),
    ) {
        let rho = ModularFunctional::power(coords.len(), p).unwrap();
        let x = Element::new(coords);
        let direct = rho.evaluate(&x.scale(t)).unwrap();
        let scaled = t.powf(p) * rho.evaluate(&x).unwrap();
        prop_assert!((direct - scaled).abs() <= 1e-12 * scaled.abs().max(1e-300) + 1e-300);
    }

    // Growth estimates never exceed 1 and never decrease in t over a
    // common sample set.
    #[test]
    fn growth_estimates_bounded_and_monotone(
        p1 in 0.3f64..3.0,
        p2 in 0.3f64..3.0,
        seed in 0u64..1000,
    ) {
        let rho = mixed_modular(p1, p2, 1.0, 1.0);
        let mut prev = 0.0f64;
        for i in 0..8 {
            let t = i as f64 / 8.0;
            let est = growth_function_estimate(&rho, t, 40, seed).unwrap().estimate;
            prop_assert!(est <= 1.0);
            prop_assert!(est + 1e-15 >= prev);
            prev = est;
        }
    }

    // corollary_reduction always emits a certificate satisfying the
    // strong-certificate invariants.
    #[test]
    fn corollary_reduction_yields_valid_certificates(
        s in 0.05f64..1.0,
        k in 0.05f64..4.0,
        l in 0.1f64..3.0,
        slack in 0.01f64..5.0,
    ) {
        let c = l.max(k * l) + slack;
        let cert = corollary_reduction(s, c, k, l).unwrap();
        prop_assert!(cert.c > cert.l);
        prop_assert!(cert.l > 0.0);
        prop_assert!(cert.k > 0.0 && cert.k < 1.0);
        prop_assert_eq!(cert.s, s);
        // α is always above 1
        prop_assert!(cert.conjugate_exponent() > 1.0);
    }

    // If (c, k, l) certifies T on a pair set, every relaxed constant
    // triple (c₀, k₀, l₀) with l ≤ l₀ < c₀ ≤ c and k ≤ k₀ < 1 passes on
    // the same pairs.
    #[test]
    fn monotone_constant_relaxation(
        c0_frac in 0.0f64..1.0,
        l0_frac in 0.0f64..1.0,
        seed in 0u64..100,
    ) {
        let rho = ModularFunctional::power(2, 2.0).unwrap();
        let map = Mapping::new(
            "0.5x+b",
            DomainDescriptor::all(2),
            Arc::new(|x: &Element| {
                let c = x.coords();
                Element::new(vec![0.5 * c[0] + 1.0, 0.5 * c[1] - 0.5])
            }),
        );
        let (c, l) = (1.5, 1.0);
        let pairs = sample_certification_pairs(&map, 100, seed);
        let base = ratio_scan_on_pairs(&map, &rho, c, l, &pairs).unwrap();
        prop_assert!(base.max_ratio < 1.0);

        // l ≤ l₀ < c₀ ≤ c with a small separating gap
        let l0 = l + l0_frac * (c - l - 0.1);
        let c0 = (l0 + 0.05) + c0_frac * (c - l0 - 0.05);
        let relaxed = ratio_scan_on_pairs(&map, &rho, c0, l0, &pairs).unwrap();
        prop_assert!(
            relaxed.max_ratio <= base.max_ratio * (1.0 + 1e-12) + 1e-15,
            "scan at ({}, {}) gave {} above base {}",
            c0, l0, relaxed.max_ratio, base.max_ratio
        );
    }

    // Δ₂ certificates for power modulars replay cleanly on fresh sample
    // sets: the identity ρ(2x) = 2^p ρ(x) is exact, so failures are
    // impossible rather than merely rare.
    #[test]
    fn delta2_replay_never_fails_for_power(
        p in 0.4f64..3.0,
        delta in 0.05f64..20.0,
        seed in 0u64..50,
    ) {
        let rho = ModularFunctional::power(3, p).unwrap();
        let cert = estimate_delta2(&rho, delta, 100, seed).unwrap();
        prop_assert!(cert.valid);
        let margin = cert.replay(&rho, 100, seed + 1000).unwrap();
        prop_assert!(margin <= ABS_TOL, "margin {margin}");
    }
}

/// Spec'd chain at every recorded step of a certified strong contraction:
/// ρ(c(x_{m+1} − x_m)) ≤ k·ρ(l(x_m − x_{m−1})) ≤ k·ρ(c(x_m − x_{m−1})).
#[test]
fn geometric_residual_decay_chain() {
    let rho = ModularFunctional::power(2, 2.0).unwrap();
    let spec = AffineMapSpec {
        matrix: vec![vec![0.55, 0.0], vec![0.0, -0.3]],
        offset: vec![1.0, 2.0],
        domain_box: None,
    };
    let map = make_affine_map(&spec).unwrap();
    let certification = certify_strong(&map, &rho, 1.2, 1.0, 500, 21).unwrap();
    let cert = certification.certificate;
    let x0 = Element::new(vec![-4.0, 9.0]);
    let result = solve_strong(
        &map,
        &rho,
        &cert,
        &x0,
        1e-16,
        100_000,
        SolveMode::ScaledRho,
    )
    .unwrap();
    let iterates = &result.trace.iterates;
    assert!(iterates.len() >= 3);
    let mut checked = 0;
    for m in 1..iterates.len() - 1 {
        let step_prev_l = rho.distance(cert.l, &iterates[m], &iterates[m - 1]).unwrap();
        // steps below ~1e-20 in ρ sit at coordinate differences of 1e-10,
        // where subtraction noise rivals the 1% certificate margin
        if step_prev_l < 1e-20 {
            break;
        }
        let step_next = rho.distance(cert.c, &iterates[m + 1], &iterates[m]).unwrap();
        let step_prev_c = rho.distance(cert.c, &iterates[m], &iterates[m - 1]).unwrap();
        assert!(step_next <= cert.k * step_prev_l * (1.0 + 1e-9) + 1e-300);
        assert!(cert.k * step_prev_l <= cert.k * step_prev_c * (1.0 + 1e-9));
        checked += 1;
    }
    assert!(checked >= 20, "chain checked on too few steps: {checked}");
}

/// Restart independence: two admissible starts agree to ρ-distance 2·tol.
#[test]
fn restart_independence() {
    let rho = ModularFunctional::power(3, 2.0).unwrap();
    let spec = AffineMapSpec {
        matrix: vec![
            vec![0.4, 0.1, 0.0],
            vec![0.0, -0.5, 0.1],
            vec![0.05, 0.0, 0.3],
        ],
        offset: vec![1.0, -2.0, 0.5],
        domain_box: None,
    };
    let map = make_affine_map(&spec).unwrap();
    let certification = certify_strong(&map, &rho, 1.1, 1.0, 500, 33).unwrap();
    let cert = certification.certificate;
    let tol = 1e-14;
    let solve_from = |coords: Vec<f64>| {
        solve_strong(
            &map,
            &rho,
            &cert,
            &Element::new(coords),
            tol,
            1_000_000,
            SolveMode::ScaledRho,
        )
        .unwrap()
    };
    let a = solve_from(vec![0.0, 0.0, 0.0]);
    let b = solve_from(vec![5.0, -5.0, 2.5]);
    assert!(a.converged && b.converged);
    let gap = rho.distance(cert.c, &a.point, &b.point).unwrap();
    assert!(gap <= 2.0 * tol, "gap {gap}");
}

/// Every constructed mapping sends 10³ sampled domain points back into
/// its domain.
#[test]
fn constructed_mappings_are_self_maps() {
    let affine = make_affine_map(&AffineMapSpec {
        matrix: vec![vec![0.5, 0.2], vec![-0.1, 0.3]],
        offset: vec![1.0, -1.0],
        domain_box: None,
    })
    .unwrap();
    affine.self_map_check(1000, 1).unwrap();

    let rotation = make_rotation_map(1.23, &[0.5, 0.5]).unwrap();
    rotation.self_map_check(1000, 2).unwrap();

    let volterra = make_volterra_operator(&VolterraSpec {
        horizon: 1.0,
        grid_size: 16,
        kernel: KernelSpec::Constant { value: 0.5 },
        nonlinearity: NonlinearitySpec::Tanh,
        forcing: ForcingSpec::Constant { value: 1.0 },
        weight_rate: None,
    })
    .unwrap();
    volterra.mapping.self_map_check(1000, 3).unwrap();
}

/// For diagonal affine maps the certified ratio estimate matches the
/// analytic value `max (c|aᵢ|/l)^p` to within 1%.
#[test]
fn diagonal_affine_estimate_matches_analytic_ratio() {
    let cases = [
        (vec![0.5, -0.3], 2.0, 1.2, 1.0),
        (vec![0.7, 0.2], 1.0, 1.1, 1.0),
        (vec![-0.6, 0.55, 0.1], 2.0, 1.05, 1.0),
    ];
    for (diag, p, c, l) in cases {
        let n = diag.len();
        let rho = ModularFunctional::power(n, p).unwrap();
        let mut matrix = vec![vec![0.0; n]; n];
        for (i, &d) in diag.iter().enumerate() {
            matrix[i][i] = d;
        }
        let map = make_affine_map(&AffineMapSpec {
            matrix,
            offset: vec![0.3; n],
            domain_box: None,
        })
        .unwrap();
        let analytic = diag
            .iter()
            .map(|a| (c * a.abs() / l).powf(p))
            .fold(0.0f64, f64::max);
        let certification = certify_strong(&map, &rho, c, l, 1000, 5).unwrap();
        assert!(
            (certification.empirical_k - analytic).abs() <= 0.01 * analytic,
            "estimated {} vs analytic {analytic}",
            certification.empirical_k
        );
    }
}

/// A Volterra operator with `Lip(f)·sup|K|·A < 1` is a strict
/// ρ-contraction under the plain quadrature modular.
#[test]
fn small_volterra_is_strict_contraction_on_plain_modular() {
    let spec = VolterraSpec {
        horizon: 1.0,
        grid_size: 32,
        kernel: KernelSpec::Constant { value: 0.5 },
        nonlinearity: NonlinearitySpec::Identity,
        forcing: ForcingSpec::Constant { value: 1.0 },
        weight_rate: Some(0.0),
    };
    let problem = make_volterra_operator(&spec).unwrap();
    assert!(problem.hints.plain_k < 1.0);
    let certification =
        certify_strict(&problem.mapping, &problem.plain_modular, 1.0, 200, 8).unwrap();
    assert!(certification.empirical_k < 1.0);
    // the theory bound κ·A dominates the empirical estimate
    assert!(certification.empirical_k <= problem.hints.plain_k * (1.0 + 1e-9));
}

/// Segment solutions satisfy their defining equation to the requested
/// tolerance, assertable directly.
#[test]
fn segment_equation_residual_is_met() {
    use rhofix::modular::check_regular_growth;
    use rhofix::nonexpansive::solve_segment;

    let rho = ModularFunctional::power(2, 2.0).unwrap();
    let grid: Vec<f64> = (0..10).map(|i| i as f64 * 0.95 / 9.0).collect();
    let growth = check_regular_growth(&rho, &grid, 50).unwrap().profile;
    for (theta, beta) in [(0.8, 0.3), (2.0, 0.5), (1.3, 0.85)] {
        let map = make_rotation_map(theta, &[0.7, -0.2]).unwrap();
        let z = Element::new(vec![0.1, 0.1]);
        let tol = 1e-20;
        let x = solve_segment(&map, &z, beta, &rho, &growth, tol).unwrap();
        let tx = map.apply(&x).unwrap();
        let target = z.combine(1.0 - beta, &tx, beta);
        let residual = rho.distance(1.0, &x, &target).unwrap();
        assert!(residual <= tol, "θ = {theta}, β = {beta}: residual {residual}");
    }
}

/// Certificates constructed by hand respect the same invariants the
/// estimator enforces.
#[test]
fn certificate_invariants_reject_bad_constants() {
    assert!(StrongContractionCertificate::new(2.0, 1.0, 0.5, 1.0).is_ok());
    assert!(StrongContractionCertificate::new(1.0, 2.0, 0.5, 1.0).is_err());
    assert!(StrongContractionCertificate::new(2.0, 1.0, 1.0, 1.0).is_err());
    assert!(StrongContractionCertificate::new(2.0, 1.0, 0.5, 0.0).is_err());
    assert!(StrongContractionCertificate::new(2.0, 1.0, 0.5, 1.5).is_err());
}
