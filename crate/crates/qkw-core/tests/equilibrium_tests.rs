//! Equilibrium machinery at coarse grids: best responses, gradient
//! agreement, coalition claims and goods-flow graphs. The fine-grid anchor
//! values live in the acceptance suite.

use qkw_core::channel::{decompose_population, population_block};
use qkw_core::circuit::{
    Agent, Good, StrategyEnsemble, StrategyProfile, COALITION_THETA, QUANTUM_THETA,
};
use qkw_core::economy::EconomyParams;
use qkw_core::equilibrium::{
    coalition_analysis, flow_graph, pair_improvement_search, production_start,
    quantum_best_response, quantum_equilibria, quantum_gradient_closed_form,
    quantum_gradient_finite_difference, quantum_payoffs, ClassicalSweep, GradientAxis, Pair,
};

fn red_region_params() -> EconomyParams {
    EconomyParams::from_cost_coordinates(0.4, 0.4, 100.0, 0.9, 1.0).unwrap()
}

#[test]
fn bob_always_prefers_accepting_his_payment_good() {
    // V_B at s_B = 1 beats s_B = 0 across a coarse (s_A, s_C) grid, and the
    // consumption-weighted distribution shift is positive
    let params = EconomyParams::new(100.0, 0.9, [1.0, 4.0, 9.0]).unwrap();
    let init = production_start();
    for i in 0..5 {
        for j in 0..5 {
            let (sa, sc) = (i as f64 / 4.0, j as f64 / 4.0);
            let e1 = StrategyEnsemble::pure(StrategyProfile::classical([sa, 1.0, sc], 0.0).unwrap());
            let e0 = StrategyEnsemble::pure(StrategyProfile::classical([sa, 0.0, sc], 0.0).unwrap());
            let b1 = population_block(&e1).unwrap();
            let b0 = population_block(&e0).unwrap();
            let r1 = decompose_population(&b1.t8, Some(&init)).limit_distribution().unwrap();
            let r0 = decompose_population(&b0.t8, Some(&init)).limit_distribution().unwrap();
            let v = params.cost_vector(Agent::B);
            let w1 = b1.w[1];
            let pay = |w: &[f64; 8], r: &[f64; 8]| -> f64 {
                (0..8).map(|k| (-v[k] + 0.9 * 100.0 * w[k]) * r[k]).sum()
            };
            assert!(pay(&w1, &r1) > pay(&b0.w[1], &r0), "sa={sa} sc={sc}");
            let shift: f64 = (0..8).map(|k| w1[k] * (r1[k] - r0[k])).sum();
            assert!(shift > 0.0, "sa={sa} sc={sc}");
        }
    }
}

#[test]
fn gradient_closed_forms_match_finite_differences() {
    let params = red_region_params();
    let init = production_start();
    for i in 0..5 {
        for j in 0..5 {
            let qa = 0.1 + 0.8 * i as f64 / 4.0;
            let qb = 0.1 + 0.8 * j as f64 / 4.0;
            for axis in [GradientAxis::AliceOwn, GradientAxis::BobOwn] {
                let closed = quantum_gradient_closed_form(axis, qa, qb, &params);
                let fd = quantum_gradient_finite_difference(
                    axis,
                    qa,
                    qb,
                    QUANTUM_THETA,
                    &params,
                    &init,
                    1e-4,
                )
                .unwrap();
                let rel = (closed - fd).abs() / closed.abs().max(1e-12);
                assert!(rel < 1e-5, "axis {axis:?} at ({qa},{qb}): {closed} vs {fd}");
            }
        }
    }
}

#[test]
fn alice_best_response_saturates_when_bob_attacks() {
    let params = red_region_params();
    let init = production_start();
    for qb in [0.25, 0.5, 1.0] {
        let br =
            quantum_best_response(Agent::A, qb, 21, QUANTUM_THETA, &params, &init).unwrap();
        assert_eq!(br.argmax, vec![1.0], "qb={qb}");
    }
    // with q_B = 0 Alice's payoff is flat: every grid point is a best response
    let br = quantum_best_response(Agent::A, 0.0, 21, QUANTUM_THETA, &params, &init).unwrap();
    assert_eq!(br.argmax.len(), 21);
}

#[test]
fn mutual_attack_point_is_an_equilibrium() {
    let params = red_region_params();
    let init = production_start();
    let eqs = quantum_equilibria(6, QUANTUM_THETA, &params, &init).unwrap();
    assert!(eqs.contains(&(1.0, 1.0)));
}

#[test]
fn coalition_optima_follow_alices_dial() {
    let params = red_region_params();
    let init = production_start();
    // Alice plain: the coalition maxes both payoffs at (p, q_B) = (1, 1)
    let rep = coalition_analysis(0.0, &params, 5, COALITION_THETA, &init).unwrap();
    assert!(!rep.joint_optima.is_empty());
    for pt in &rep.joint_optima {
        assert_eq!((pt.p, pt.q_b), (1.0, 1.0));
    }
    assert!(rep.max_v_b > rep.baseline[1] + 1e-6);
    assert!(rep.max_v_c > rep.baseline[2] + 1e-6);
    // Alice blocking: the optimum flips to (p, q_C') = (0, 1)
    let rep = coalition_analysis(1.0, &params, 5, COALITION_THETA, &init).unwrap();
    assert!(!rep.joint_optima.is_empty());
    for pt in &rep.joint_optima {
        assert_eq!((pt.p, pt.q_c_prime), (0.0, 1.0));
    }
    assert!(rep.max_v_b > rep.baseline[1] + 1e-6);
    assert!(rep.max_v_c > rep.baseline[2] + 1e-6);
}

#[test]
fn no_alice_pair_improves_both_members() {
    let params = red_region_params();
    let init = production_start();
    for pair in [Pair::AliceBob, Pair::AliceCharlie] {
        let rep = pair_improvement_search(pair, &params, 5, COALITION_THETA, &init).unwrap();
        assert!(
            rep.improvements.is_empty(),
            "{} found {:?}",
            pair.name(),
            rep.improvements.first()
        );
    }
    let rep = pair_improvement_search(Pair::BobCharlie, &params, 5, COALITION_THETA, &init).unwrap();
    assert!(!rep.improvements.is_empty());
}

#[test]
fn classical_flow_graphs_identify_the_media_of_exchange() {
    let cases: [([f64; 3], [f64; 8], &[Good]); 3] = [
        (
            [1.0, 1.0, 1.0],
            [0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
            &[Good::G1],
        ),
        (
            [0.0, 1.0, 1.0],
            [3.0 / 7.0, 0.0, 2.0 / 7.0, 0.0, 1.0 / 7.0, 0.0, 1.0 / 7.0, 0.0],
            &[Good::G1, Good::G3],
        ),
        (
            [1.0, 1.0, 0.0],
            [1.0 / 7.0, 1.0 / 7.0, 2.0 / 7.0, 3.0 / 7.0, 0.0, 0.0, 0.0, 0.0],
            &[Good::G1, Good::G2],
        ),
    ];
    for (s, steady, media) in cases {
        let e = StrategyEnsemble::pure(StrategyProfile::classical(s, 0.0).unwrap());
        let g = flow_graph(&steady, &e).unwrap();
        assert_eq!(g.media_goods(), media.to_vec(), "s={s:?}");
    }
}

#[test]
fn entangled_equilibrium_flow_moves_good_three_between_alice_and_bob() {
    let e = StrategyEnsemble::pure(StrategyProfile::quantum([1.0, 1.0, 0.0], QUANTUM_THETA).unwrap());
    let steady = [5.0 / 12.0, 0.0, 4.0 / 12.0, 0.0, 1.0 / 12.0, 0.0, 2.0 / 12.0, 0.0];
    let g = flow_graph(&steady, &e).unwrap();
    // Bob hands his production good 3 to Alice when attacking from |231>,
    // and Alice hands good 3 back to Bob from |311>
    assert!(g
        .edges
        .iter()
        .any(|ed| ed.from == Agent::B && ed.to == Agent::A && ed.good == Good::G3));
    assert!(g
        .edges
        .iter()
        .any(|ed| ed.from == Agent::A && ed.to == Agent::B && ed.good == Good::G3));
}

#[test]
fn sweep_payoffs_expose_the_wide_cost_equilibrium() {
    let sweep = ClassicalSweep::compute(11, 1.0, 0.0, production_start()).unwrap();
    let params = red_region_params();
    let br_a = sweep.best_response_a(10, &params); // s_C = 1
    assert_eq!(br_a.argmax, vec![1.0]);
    let br_c = sweep.best_response_c(10, &params); // s_A = 1
    assert_eq!(br_c.argmax, vec![1.0]);
    let surface = sweep.payoff_surface(&params);
    assert_eq!(surface.len(), 121);
}
