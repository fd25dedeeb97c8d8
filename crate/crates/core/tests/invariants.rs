use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use biharmonic_core::ode::{self, IntegrateOptions, MinimalKind};
use biharmonic_core::profiles::{Branch, Family, ProfileJet, RotationKind, RotationProfile};
use biharmonic_core::report;
use biharmonic_core::residual;
use biharmonic_core::suites::{self, ClaimStatus, Suite, SuiteConfig, SuiteRegistry, SystemRegistry};
use proptest::prelude::*;

/// Suites that take a tolerance, with their defaults.
const TOLERANT: [(&str, f64); 5] = [
    ("cylinder", 1e-10),
    ("constant-angle", 1e-8),
    ("flat-rotation", 1e-10),
    ("minimal-null", 1e-8),
    ("umbilic-m4", 1e-8),
];

#[test]
fn confirmed_claims_survive_tenfold_tighter_tolerance() {
    let registry = SuiteRegistry::default();
    for (name, tol) in TOLERANT {
        let suite = registry.get(name).unwrap();
        let loose = suite.run(&SuiteConfig::default()).unwrap();
        let tight = suite
            .run(&SuiteConfig {
                tol: Some(tol / 10.0),
                ..Default::default()
            })
            .unwrap();
        assert_eq!(loose.claims.len(), tight.claims.len(), "{name}");
        for (a, b) in loose.claims.iter().zip(&tight.claims) {
            if a.status == ClaimStatus::Confirmed {
                assert_eq!(b.status, ClaimStatus::Confirmed, "{name}: '{}' is marginal", a.description);
            }
        }
    }
}

#[test]
fn every_suite_passes_with_defaults() {
    let verdicts = SuiteRegistry::default().run("all", &SuiteConfig::default()).unwrap();
    assert_eq!(verdicts.len(), 8);
    for v in verdicts {
        let bad: Vec<_> = v.violated().map(|c| &c.description).collect();
        assert!(v.overall, "{}: {bad:?}", v.suite_name);
    }
}

#[test]
fn cylinder_verdict_ignores_normal_orientation() {
    for m in [2, 3, 5, 8] {
        for case in suites::cylinder_cases(m) {
            let flipped: Vec<f64> = case.spectrum.iter().map(|l| -l).collect();
            let (h1, r1) = suites::cylinder_residuals(m, &case.spectrum, 1e-10).unwrap();
            let (h2, r2) = suites::cylinder_residuals(m, &flipped, 1e-10).unwrap();
            assert_eq!(h1, h2);
            for (a, b) in r1.values.iter().zip(&r2.values) {
                assert_eq!(a.abs(), b.abs());
            }
        }
    }
}

#[test]
fn sweeps_are_deterministic_and_round_trip() {
    let p = RotationProfile::new(
        RotationKind::SphereHypersurface,
        Family::SemiparallelCase3 {
            c_const: -0.4,
            branch: Branch::Plus,
        },
    )
    .unwrap();
    let grid = suites::parse_range("0.1:0.8:0.005").unwrap();
    let reg = SystemRegistry::default();
    let run = || {
        let out = suites::sweep(reg.get("rotation").unwrap(), &p, 4, &grid, 1e-8).unwrap();
        let mut buf = Vec::new();
        report::write_grid_csv(&mut buf, &out.rows).unwrap();
        (buf, report::to_json_pretty(&out).unwrap(), out.rows)
    };
    let (a, ja, rows) = run();
    let (b, jb, _) = run();
    assert_eq!(a, b);
    assert_eq!(ja, jb);
    assert_eq!(report::read_grid_csv(a.as_slice()).unwrap(), rows);
}

#[test]
fn suite_verdict_json_has_frozen_fields() {
    let v = suites::CylinderSuite.run(&SuiteConfig { m: Some(3), ..Default::default() }).unwrap();
    let json: serde_json::Value = serde_json::from_str(&report::to_json_pretty(&v).unwrap()).unwrap();
    for key in ["schema", "suite_name", "parameters", "claims", "overall"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["schema"], report::SCHEMA);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // The flow solves the normal equation, so eq55 re-evaluated from dense output stays at
    // interpolation error, and eq54 at accepted samples agrees with its monitor.
    #[test]
    fn rotation_monitor_matches_dense_output(u0 in -0.3f64..0.3, u1 in -0.3f64..0.3, u2 in -0.3f64..0.3, m in 2usize..6) {
        let sys = ode::reduce_rotation_biharmonic(m, 1).unwrap();
        let opts = IntegrateOptions { max_step: Some(0.02), ..IntegrateOptions::default() };
        let tr = ode::integrate(&sys, &[u0, u1, u2], (FRAC_PI_2, FRAC_PI_2 + 0.3), &opts).unwrap();
        let eps = tr.max_monitor["eq54"];
        let residuals = |t: f64, y: &[f64]| {
            let dy = sys.derivative(t, y);
            let u = ProfileJet::new(t, y[0], y[1], y[2], dy[2]);
            let hj = residual::rotation_mean_curvature_jet(&u, t, m).unwrap();
            (residual::rotation_residual_54(&u, &hj, t, m).unwrap(), residual::rotation_residual_55(&u, &hj, t, m).unwrap())
        };
        for (smp, mon) in tr.samples.iter().zip(tr.monitor_values("eq54")) {
            let (r54, r55) = residuals(smp.t, &smp.y);
            prop_assert!((r54 - mon.unwrap()).abs() <= 1e-9 * (1.0 + r54.abs()));
            prop_assert!(r55.abs() <= 1e-9);
        }
        for w in tr.samples.windows(2) {
            let t = 0.5 * (w[0].t + w[1].t);
            let (r54, r55) = residuals(t, &tr.interpolate(t).unwrap());
            prop_assert!(r54.abs() <= 10.0 * eps + 1e-9);
            prop_assert!(r55.abs() <= 1e-6, "dense eq55 {r55}");
        }
    }

    #[test]
    fn minimal_surface_flows_are_biharmonic(k0 in 0.2f64..0.9, beta in 0.2f64..1.4, hyperbolic in any::<bool>()) {
        let kind = if hyperbolic { MinimalKind::HyperbolicSurface } else { MinimalKind::SphereSurface };
        let init = ode::minimal_surface_initial(k0, 0.0, beta.cos(), beta.sin()).unwrap();
        let (bre, general, _) = suites::minimal_surface_flow_residuals(kind, init, (0.0, 0.3)).unwrap();
        prop_assert!(bre <= 1e-8, "bre {bre}");
        prop_assert!(general <= 1e-8, "general {general}");
    }

    #[test]
    fn umbilic_normal_equals_combination_on_compatible_jets(a in 0.2f64..2.9, d in -1.5f64..1.5, c in prop::sample::select(vec![1, -1])) {
        let sys = ode::umbilic_flow_system(c);
        let jet = sys.flow_jet(0.0, &[a, d], 3).unwrap();
        let rep = residual::umbilic_m4_residuals(&ProfileJet::from_series(0.0, &jet[0]), c, 1e-10).unwrap();
        prop_assert!(rep.values[0].abs() <= 1e-12 && rep.values[1].abs() <= 1e-12);
        prop_assert!((rep.values[2] - rep.values[3]).abs() <= 1e-10);
    }
}

#[test]
fn harmonic_k_flow_at_zero_speed_stays_at_constant_k() {
    // C = 0 means k' = 0: the flow stays at k0 and the map equation reduces to the cylinder one.
    let sys = ode::harmonic_k_system(ode::SurfaceSign::Sphere);
    let tr = ode::integrate(&sys, &[FRAC_PI_4, 0.0], (0.0, 1.0), &IntegrateOptions::default()).unwrap();
    assert!(tr.samples.iter().all(|s| (s.y[0] - FRAC_PI_4).abs() < 1e-14 && s.y[1] == 0.0));
}
