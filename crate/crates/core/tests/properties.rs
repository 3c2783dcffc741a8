use std::sync::Arc;

use nsk_dg::cli::driver::integration_identity_defect;
use nsk_dg::cli::{parse_config, RunConfig, TestCase};
use nsk_dg::dgspace::{DgSpace, FieldCoeffs};
use nsk_dg::diagnostics::estimate_eoc;
use nsk_dg::forms::{FormContext, FormKind};
use nsk_dg::mesh::Mesh;
use nsk_dg::model::{density_of_phase, well_difference_quotient, well_eval, ModelParams, Viscosity, Well};
use proptest::prelude::*;

fn space(spec: &str, p: usize) -> Arc<DgSpace> {
    DgSpace::new(Arc::new(Mesh::build(&spec.parse().unwrap()).unwrap()), p).unwrap()
}

fn field(space: &Arc<DgSpace>, ncomp: usize, values: &[f64]) -> FieldCoeffs {
    let n = ncomp * space.num_dofs();
    FieldCoeffs::from_vec(space, ncomp, values.iter().cycle().take(n).copied().collect()).unwrap()
}

proptest! {
    #[test]
    fn quartic_quotient_is_the_exact_difference_quotient(x in -2.0f64..2.0, y in -2.0f64..2.0) {
        prop_assume!((y - x).abs() >= 1e-3);
        let p = ModelParams::default();
        let direct = (well_eval(&p, y).0 - well_eval(&p, x).0) / (y - x);
        let q: f64 = well_difference_quotient(&p, x, y);
        prop_assert!((q - direct).abs() <= 1e-10 * direct.abs().max(1.0));
    }

    #[test]
    fn modified_quotient_is_symmetric_and_exact(x in -1.5f64..1.5, y in -1.5f64..1.5, a in 0.0f64..1e4) {
        prop_assume!((y - x).abs() >= 1e-3);
        let p = ModelParams { well: Well::Modified { a }, ..ModelParams::default() };
        let direct = (well_eval(&p, y).0 - well_eval(&p, x).0) / (y - x);
        let (q, r): (f64, f64) = (well_difference_quotient(&p, x, y), well_difference_quotient(&p, y, x));
        prop_assert!((q - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        prop_assert!((q - r).abs() <= 1e-12 * q.abs().max(1.0));
    }

    #[test]
    fn quotient_at_coincidence_is_the_derivative(x in -1.5f64..1.5, a in 0.0f64..100.0) {
        let p = ModelParams { well: Well::Modified { a }, ..ModelParams::default() };
        let q: f64 = well_difference_quotient(&p, x, x);
        prop_assert!((q - well_eval(&p, x).1).abs() <= 1e-12 * q.abs().max(1.0));
    }

    #[test]
    fn density_is_affine(r1 in 0.1f64..10.0, r2 in 0.1f64..10.0, a in -2.0f64..2.0, b in -2.0f64..2.0, t in 0.0f64..1.0) {
        let p = ModelParams { rho1: r1, rho2: r2, ..ModelParams::default() };
        let lhs: f64 = density_of_phase(&p, t * a + (1.0 - t) * b);
        let rhs = t * density_of_phase(&p, a) + (1.0 - t) * density_of_phase(&p, b);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (r1 + r2));
    }

    #[test]
    fn eoc_is_invariant_under_scaling(errors in prop::collection::vec(1e-8f64..1.0, 2..6), s in 1e-6f64..1e6) {
        let rows: Vec<(usize, f64)> = errors.iter().enumerate().map(|(i, &e)| (16usize << i, e)).collect();
        let scaled: Vec<(usize, f64)> = rows.iter().map(|&(n, e)| (n, e * s)).collect();
        let (a, b) = (estimate_eoc(&rows).unwrap(), estimate_eoc(&scaled).unwrap());
        prop_assert_eq!(a.len(), rows.len() - 1);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn elementwise_integration_identity(seed in 0u64..1000, which in 0usize..4) {
        let (spec, p) = [("interval -1 1 5", 1), ("interval 0 3 4", 3), ("rectangle -1 1 -2 2 2 3", 2), ("disk 1 2", 1)][which];
        prop_assert!(integration_identity_defect(&space(spec, p), seed).unwrap() <= 1e-11);
    }

    #[test]
    fn forms_are_symmetric_and_nonpositive(u in prop::collection::vec(-1.0f64..1.0, 7), w in prop::collection::vec(-1.0f64..1.0, 5), which in 0usize..3) {
        let s = space(["interval -1 1 3", "rectangle 0 1 0 1 2 1", "disk 1 1"][which], 2);
        let ctx = FormContext::with_default_penalty(&s);
        let d = s.dim();
        for kind in [FormKind::A1, FormKind::A2, FormKind::A2Tensor { eta1: 0.001, eta2: 0.005 }] {
            let nc = if kind == FormKind::A1 { 1 } else { d };
            let (fu, fw) = (field(&s, nc, &u), field(&s, nc, &w));
            let (uw, wu) = (ctx.evaluate(kind, &fu, &fw).unwrap(), ctx.evaluate(kind, &fw, &fu).unwrap());
            prop_assert!((uw - wu).abs() <= 1e-11 * uw.abs().max(1.0));
            prop_assert!(ctx.evaluate(kind, &fu, &fu).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn config_text_round_trips(
        case in 0usize..6,
        rho1 in 0.1f64..10.0,
        gamma in 1e-5f64..1.0,
        m in 1e-4f64..1.0,
        degree in 1usize..4,
        tensor in any::<bool>(),
        sigma in prop::option::of(1.0f64..500.0),
    ) {
        let mut c: RunConfig = RunConfig::defaults(TestCase::ALL[case]);
        c.params.rho1 = rho1;
        c.params.gamma = gamma;
        c.params.m_j = m;
        c.params.m_r = 2.0 * m;
        c.params.sigma = sigma;
        c.degree = degree;
        if tensor {
            c.params.viscosity = Viscosity::Tensor { eta1: m, eta2: 3.0 * m };
        }
        prop_assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }
}
