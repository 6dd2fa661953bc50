use std::f64::consts::PI;

use cavqed_core::dynamics::{
    apply_pulse, effective_pair_closed_form, evolve, evolve_observed, rabi_closed_form, IntegratorConfig, PairLabel,
};
use cavqed_core::fidelity::{fidelity_analytic, integrate_decay_model};
use cavqed_core::hilbert::{basis_state, global_phase_align, AtomLevel, BasisIndex, Shape, SystemState};
use cavqed_core::model::{
    decay_augmented_hamiltonian, effective_hamiltonian, full_hamiltonian, FrameChoice, PhysicalParams, Pulse,
    Transition,
};
use cavqed_core::protocol::{Engine, EngineMode};
use cavqed_core::C64;
use proptest::prelude::*;

fn label() -> impl Strategy<Value = PairLabel> {
    prop::sample::select(PairLabel::ALL.to_vec())
}

fn qubit_amplitudes() -> impl Strategy<Value = [C64; 4]> {
    (0.0..PI, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(theta, a, b)| {
        let half = theta / 2.0;
        [C64::from_polar(half.cos(), a), C64::from_polar(half.sin(), b), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]
    })
}

/// Phase-aligned error of the dispersive evolution against the exchange
/// closed form at the gate time.
fn dispersive_error(label: PairLabel, delta: f64) -> f64 {
    let p = PhysicalParams::lossless(delta);
    let n_max = if label == PairLabel::EE { 3 } else { 2 };
    let input = basis_state(&label.levels(), 0, n_max).unwrap();
    let h = full_hamiltonian(&p, &[0, 1], FrameChoice::RotatedFrame, input.shape()).unwrap();
    let t = p.gate_time();
    let out = evolve(&input, &h, t, &IntegratorConfig::for_params(&p)).unwrap();
    let expected = effective_pair_closed_form(label, p.eta(), t).to_state(n_max).unwrap();
    global_phase_align(&out, &expected).unwrap().max_abs_diff(&expected).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn effective_evolution_matches_closed_form(label in label(), eta in 0.02f64..0.5, t in 0.0f64..60.0) {
        let input = basis_state(&label.levels(), 0, 1).unwrap();
        let mut p = PhysicalParams::lossless(1.0);
        p.delta = 1.0 / eta;
        let h = effective_hamiltonian(&p, (0, 1), input.shape()).unwrap();
        let out = evolve(&input, &h, t, &IntegratorConfig::default()).unwrap();
        let expected = effective_pair_closed_form(label, p.eta(), t).to_state(1).unwrap();
        prop_assert!(out.max_abs_diff(&expected).unwrap() < 1e-8);
    }

    #[test]
    fn hermitian_runs_conserve_norm(label in label(), delta in 10.0f64..20.0, frac in 0.0f64..1.0) {
        let p = PhysicalParams::lossless(delta);
        let input = basis_state(&label.levels(), 0, 3).unwrap();
        let h = full_hamiltonian(&p, &[0, 1], FrameChoice::RotatedFrame, input.shape()).unwrap();
        let mut drift = 0.0f64;
        evolve_observed(&input, &h, frac * p.gate_time(), &IntegratorConfig::for_params(&p), |s| {
            drift = drift.max((s.norm - 1.0).abs())
        }).unwrap();
        prop_assert!(drift < 1e-9, "{drift}");
    }

    #[test]
    fn lossy_runs_lose_norm_monotonically(kappa in 0.0f64..0.2, gamma in 0.0f64..0.2, label in label()) {
        let p = PhysicalParams::new(10.0, kappa, gamma);
        let input = basis_state(&label.levels(), 0, 3).unwrap();
        let base = full_hamiltonian(&p, &[0, 1], FrameChoice::RotatedFrame, input.shape()).unwrap();
        let h = decay_augmented_hamiltonian(&base, &p).unwrap();
        let mut last = f64::INFINITY;
        let mut monotone = true;
        evolve_observed(&input, &h, p.gate_time(), &IntegratorConfig::for_params(&p), |s| {
            monotone &= s.norm <= last + 1e-15;
            last = s.norm;
        }).unwrap();
        prop_assert!(monotone);
    }

    #[test]
    fn pulse_matches_rabi_solution(a in qubit_amplitudes(), rabi in 0.2f64..2.0, phase in 0.0f64..(2.0 * PI), t in 0.0f64..5.0) {
        let shape = Shape::new(1, 0).unwrap();
        let mut amps = vec![C64::new(0.0, 0.0); shape.dim()];
        // a[0] on |0>, a[1] on |g>
        amps[AtomLevel::Zero.index()] = a[0];
        amps[AtomLevel::G.index()] = a[1];
        let psi = SystemState::from_amplitudes(shape, amps).unwrap();
        let pulse = Pulse::new(&[0], Transition::ZERO_G, rabi, phase, t).unwrap();
        let out = apply_pulse(&psi, &pulse, &IntegratorConfig::default()).unwrap();
        let (g, zero) = rabi_closed_form(a[1], a[0], rabi, phase, t);
        prop_assert!((out.amplitudes()[AtomLevel::G.index()] - g).norm() < 1e-9);
        prop_assert!((out.amplitudes()[AtomLevel::Zero.index()] - zero).norm() < 1e-9);
    }

    #[test]
    fn dormant_atom_is_untouched(dormant in qubit_amplitudes(), c in any::<bool>(), t in any::<bool>()) {
        let engine = Engine::new(PhysicalParams::lossless(10.0), EngineMode::Effective).unwrap();
        let basis = |bit: bool| {
            let mut a = [C64::new(0.0, 0.0); 4];
            a[AtomLevel::qubit(bit).index()] = C64::new(1.0, 0.0);
            a
        };
        let input = SystemState::product(&[basis(c), dormant, basis(t)], 0, 2).unwrap();
        let out = engine.csign(&input, 0, 2).unwrap().final_state;
        let sign = if c && t { -1.0 } else { 1.0 };
        let expected = input.scaled(C64::new(sign, 0.0));
        let err = global_phase_align(&out, &expected).unwrap().max_abs_diff(&expected).unwrap();
        prop_assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn flat_index_round_trips(levels in prop::collection::vec(0usize..4, 1..=4), n_max in 0usize..4, photons in 0usize..4) {
        let photons = photons.min(n_max);
        let levels: Vec<AtomLevel> = levels.into_iter().map(|i| AtomLevel::from_index(i).unwrap()).collect();
        let shape = Shape::new(levels.len(), n_max).unwrap();
        let idx = BasisIndex::new(levels, photons);
        let flat = idx.flatten(n_max).unwrap();
        prop_assert!(flat < shape.dim());
        prop_assert_eq!(BasisIndex::unflatten(flat, shape).unwrap(), idx);
    }
}

#[test]
fn decay_model_agrees_with_lossy_full_hamiltonian() {
    // both describe |e g 0>, |g e 0>, |g g 1> with no-jump losses
    for (gamma, kappa) in [(0.001, 0.1), (0.01, 0.01), (0.1, 0.01)] {
        let p = PhysicalParams::new(10.0, kappa, gamma);
        let cfg = IntegratorConfig::for_params(&p);
        let input = basis_state(&[AtomLevel::E, AtomLevel::G], 0, 2).unwrap();
        let base = full_hamiltonian(&p, &[0, 1], FrameChoice::RotatedFrame, input.shape()).unwrap();
        let h = decay_augmented_hamiltonian(&base, &p).unwrap();
        let out = evolve(&input, &h, p.gate_time(), &cfg).unwrap();
        let eg = BasisIndex::new(vec![AtomLevel::E, AtomLevel::G], 0).flatten(2).unwrap();
        let from_engine = out.amplitudes()[eg].norm_sqr();
        let model = integrate_decay_model(&p, p.gate_time(), &cfg, |_, _| {}).unwrap();
        assert!((from_engine - model.a.norm_sqr()).abs() < 1e-6, "{from_engine} vs {}", model.a.norm_sqr());
        // adiabatic elimination stays within the table's spread of the explicit model
        assert!((fidelity_analytic(&p) - model.a.norm_sqr()).abs() < 2e-2);
    }
}

#[test]
fn rk4_global_error_is_fourth_order() {
    let p = PhysicalParams::lossless(1.0);
    let input = basis_state(&[AtomLevel::E, AtomLevel::G], 0, 0).unwrap();
    let h = effective_hamiltonian(&p, (0, 1), input.shape()).unwrap();
    let exact = effective_pair_closed_form(PairLabel::EG, p.eta(), 200.0).to_state(0).unwrap();
    let err = |dt: f64| {
        evolve(&input, &h, 200.0, &IntegratorConfig::with_dt(dt)).unwrap().max_abs_diff(&exact).unwrap()
    };
    let ratio = err(0.004) / err(0.002);
    assert!(ratio >= 2f64.powf(3.5), "error ratio {ratio}");
}

#[test]
fn dispersive_error_shrinks_with_detuning() {
    let deltas = [10.0, 30.0, 100.0, 300.0];
    for label in [PairLabel::EG, PairLabel::EA] {
        let errors: Vec<f64> = deltas.iter().map(|&d| dispersive_error(label, d)).collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "{label}: {errors:?}");
        // second order at the gate time: fast transients cancel there
        for (d, e) in deltas.iter().zip(&errors) {
            assert!(e * d * d < 2.0 * PI * 1.1, "{label} at {d}: {e}");
        }
    }
    for label in [PairLabel::GG, PairLabel::GA] {
        assert_eq!(dispersive_error(label, 10.0), 0.0);
    }
}

#[test]
fn cavity_returns_to_vacuum() {
    for delta in [10.0, 30.0, 100.0] {
        let p = PhysicalParams::lossless(delta);
        let engine = Engine::new(p, EngineMode::Full).unwrap();
        let input = basis_state(&[AtomLevel::One, AtomLevel::One], 0, 2).unwrap();
        let trace = engine.csign(&input, 0, 1).unwrap();
        let photons = 1.0 - trace.cavity_vacuum_population();
        assert!(photons < 4.0 / (delta * delta), "delta {delta}: {photons}");
        let effective = Engine::new(p, EngineMode::Effective).unwrap().csign(&input, 0, 1).unwrap();
        assert!((1.0 - effective.cavity_vacuum_population()).abs() < 1e-12);
    }
}
