//! Physical parameters, pulses and Hamiltonians in the [`hilbert`] basis.
//!
//! Conventions: ħ = 1, Ωc sets the unit of frequency. Couplings enter with a
//! minus sign, `-Ωc (|e><g| a + h.c.)` for the cavity and
//! `-Ω (e^{iφ}|to><from| + h.c.)` for external drives. In the rotated frame
//! the free evolution collapses to `-Δ a†a`, which gives the amplitude
//! equations `ȧ = iΩc c`, `ċ = iΔ c + iΩc (a + b)` for one excitation.
//!
//! [`hilbert`]: crate::hilbert

use alloc::{format, vec::Vec};
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64 as C64;

use crate::hilbert::{AtomLevel, Operator, Shape};
use crate::{Error, Result};

fn wrap_phase(phase: f64) -> f64 {
    let r = libm::fmod(phase, TAU);
    if r < 0.0 { r + TAU } else { r }
}

/// Phase that moves population `from -> to` under a half-cycle pulse.
pub const PHASE_FORWARD: f64 = 3.0 * FRAC_PI_2;
/// Phase that moves population `to -> from` under a half-cycle pulse.
pub const PHASE_BACKWARD: f64 = FRAC_PI_2;

/// Detuning-to-coupling ratio above which adiabatic elimination is trusted.
pub const DISPERSIVE_RATIO: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Atom-cavity coupling Ωc (1 by convention).
    pub omega_c: f64,
    /// Cavity detuning Δ = ω_e - ω_g - ν.
    pub delta: f64,
    /// Cavity field decay rate.
    pub kappa: f64,
    /// Spontaneous decay rate of |e>.
    pub gamma: f64,
    /// Cavity frequency; lab frame only.
    pub nu_k: Option<f64>,
    /// Energy of |e> above |0>; lab frame only.
    pub omega_e: Option<f64>,
    /// Energy of |g> above |0>; lab frame only.
    pub omega_g: Option<f64>,
}

impl PhysicalParams {
    /// Rotated-frame parameters with Ωc = 1.
    pub fn new(delta: f64, kappa: f64, gamma: f64) -> Self {
        PhysicalParams {
            omega_c: 1.0,
            delta,
            kappa,
            gamma,
            nu_k: None,
            omega_e: None,
            omega_g: None,
        }
    }

    pub fn lossless(delta: f64) -> Self {
        Self::new(delta, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(Error::InvalidParams(format!("omega_c must be positive, got {}", self.omega_c)));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidParams(format!("delta must be positive, got {}", self.delta)));
        }
        check_rate("kappa", self.kappa)?;
        check_rate("gamma", self.gamma)?;
        for (name, v) in [("nu_k", self.nu_k), ("omega_e", self.omega_e), ("omega_g", self.omega_g)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
                }
            }
        }
        Ok(())
    }

    /// Cavity-mediated exchange rate η = Ωc²/Δ.
    pub fn eta(&self) -> f64 {
        self.omega_c * self.omega_c / self.delta
    }

    /// Interaction time of the phase gate, t = π/η.
    pub fn gate_time(&self) -> f64 {
        PI / self.eta()
    }

    pub fn is_dispersive(&self) -> bool {
        self.delta >= DISPERSIVE_RATIO * self.omega_c
    }

    /// Lab-frame energies, if enough are given: (ν, ω_g, ω_e).
    pub fn lab_energies(&self) -> Option<(f64, f64, f64)> {
        let omega_e = self.omega_e?;
        let omega_g = self.omega_g.unwrap_or(0.0);
        let nu = self.nu_k.unwrap_or(omega_e - omega_g - self.delta);
        Some((nu, omega_g, omega_e))
    }
}

fn check_rate(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRate { name, value })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FrameChoice {
    #[default]
    RotatedFrame,
    LabFrame,
}

/// Driven transition. The drive term is `e^{iφ}|to><from| + h.c.`; the
/// direction in which population moves is set by the phase, not by the order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: AtomLevel,
    pub to: AtomLevel,
}

impl Transition {
    /// |0> <-> |g> on the target and control atoms.
    pub const ZERO_G: Transition = Transition { from: AtomLevel::Zero, to: AtomLevel::G };
    /// |1> <-> |e> on the control atom.
    pub const ONE_E: Transition = Transition { from: AtomLevel::One, to: AtomLevel::E };
}

/// Square pulse on one transition of a set of atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct Pulse {
    atoms: Vec<usize>,
    transition: Transition,
    rabi: f64,
    phase: f64,
    duration: f64,
}

impl Pulse {
    pub fn new(
        atoms: &[usize],
        transition: Transition,
        rabi: f64,
        phase: f64,
        duration: f64,
    ) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidPulse("no atoms addressed".into()));
        }
        if transition.from == transition.to {
            return Err(Error::InvalidPulse(format!("degenerate transition {0}->{0}", transition.from)));
        }
        if !(rabi.is_finite() && rabi >= 0.0) {
            return Err(Error::InvalidPulse(format!("Rabi frequency must be >= 0, got {rabi}")));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::InvalidPulse(format!("duration must be >= 0, got {duration}")));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidPulse(format!("phase must be finite, got {phase}")));
        }
        let mut atoms = atoms.to_vec();
        atoms.sort_unstable();
        atoms.dedup();
        Ok(Pulse { atoms, transition, rabi, phase: wrap_phase(phase), duration })
    }

    /// Pulse with Ωt = π/2: full transfer for φ = 3π/2 (from→to) or
    /// φ = π/2 (to→from).
    pub fn half_cycle(atoms: &[usize], transition: Transition, rabi: f64, phase: f64) -> Result<Self> {
        if !(rabi > 0.0) {
            return Err(Error::InvalidPulse(format!("half-cycle pulse needs Rabi > 0, got {rabi}")));
        }
        Self::new(atoms, transition, rabi, phase, FRAC_PI_2 / rabi)
    }

    /// Same pulse with the opposite transfer phase.
    pub fn reversed(&self) -> Self {
        Pulse { phase: wrap_phase(self.phase + PI), ..self.clone() }
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn transition(&self) -> Transition {
        self.transition
    }

    pub fn rabi(&self) -> f64 {
        self.rabi
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

fn check_atoms(shape: Shape, atoms: &[usize]) -> Result<()> {
    atoms.iter().try_for_each(|&a| shape.check_atom(a))
}

/// Dispersive atom-cavity Hamiltonian with `active_atoms` coupled to the mode.
pub fn full_hamiltonian(
    params: &PhysicalParams,
    active_atoms: &[usize],
    frame: FrameChoice,
    shape: Shape,
) -> Result<Operator> {
    params.validate()?;
    check_atoms(shape, active_atoms)?;
    let mut active = active_atoms.to_vec();
    active.sort_unstable();
    active.dedup();

    let mut h = match frame {
        FrameChoice::RotatedFrame => {
            Operator::diagonal(shape, |i| C64::new(-params.delta * shape.photons_of(i) as f64, 0.0))
        }
        FrameChoice::LabFrame => {
            let (nu, omega_g, omega_e) = params.lab_energies().ok_or_else(|| {
                Error::InvalidParams("lab frame requires omega_e".into())
            })?;
            Operator::diagonal(shape, |i| {
                let atomic: f64 = (0..shape.n_atoms)
                    .map(|k| match shape.level_of(i, k) {
                        AtomLevel::G => omega_g,
                        AtomLevel::E => omega_e,
                        _ => 0.0,
                    })
                    .sum();
                C64::new(nu * shape.photons_of(i) as f64 + atomic, 0.0)
            })
        }
    };

    for flat in 0..shape.dim() {
        let n = shape.photons_of(flat);
        if n == 0 {
            continue;
        }
        let amp = C64::new(-params.omega_c * libm::sqrt(n as f64), 0.0);
        for &atom in &active {
            if shape.level_of(flat, atom) != AtomLevel::G {
                continue;
            }
            // |g, n> <-> |e, n-1>
            let excited = shape.with_photons(shape.with_level(flat, atom, AtomLevel::E), n - 1);
            h.add_at(excited, flat, amp);
            h.add_at(flat, excited, amp);
        }
    }
    h.set_hermitian(true);
    Ok(h)
}

/// Cavity-mediated exchange between atoms `i` and `j`, identity on the
/// cavity and on every other atom.
pub fn effective_hamiltonian(params: &PhysicalParams, pair: (usize, usize), shape: Shape) -> Result<Operator> {
    params.validate()?;
    let (i, j) = pair;
    shape.check_atom(i)?;
    shape.check_atom(j)?;
    if i == j {
        return Err(Error::InvalidPair { index: i });
    }
    let eta = params.eta();
    let mut h = Operator::diagonal(shape, |flat| {
        let excited = [i, j].iter().filter(|&&k| shape.level_of(flat, k) == AtomLevel::E).count();
        C64::new(eta * excited as f64, 0.0)
    });
    for flat in 0..shape.dim() {
        let (li, lj) = (shape.level_of(flat, i), shape.level_of(flat, j));
        if li == AtomLevel::G && lj == AtomLevel::E {
            // |g_i e_j> <-> |e_i g_j>
            let swapped = shape.with_level(shape.with_level(flat, i, AtomLevel::E), j, AtomLevel::G);
            h.add_at(swapped, flat, C64::new(eta, 0.0));
            h.add_at(flat, swapped, C64::new(eta, 0.0));
        }
    }
    h.set_hermitian(true);
    Ok(h)
}

/// External drive of one pulse, acting as identity on undriven atoms and on
/// the cavity.
pub fn drive_hamiltonian(pulse: &Pulse, shape: Shape) -> Result<Operator> {
    check_atoms(shape, pulse.atoms())?;
    let mut h = Operator::zero(shape);
    if pulse.rabi == 0.0 {
        return Ok(h);
    }
    let up = C64::from_polar(-pulse.rabi, pulse.phase);
    let Transition { from, to } = pulse.transition;
    for flat in 0..shape.dim() {
        for &atom in pulse.atoms() {
            if shape.level_of(flat, atom) == from {
                let raised = shape.with_level(flat, atom, to);
                h.add_at(raised, flat, up);
                h.add_at(flat, raised, up.conj());
            }
        }
    }
    h.set_hermitian(true);
    Ok(h)
}

/// Adds the no-jump decay terms `-i(γ/2)|e><e|` on every atom and
/// `-i(κ/2) a†a`. `base` is expected in the rotated frame.
pub fn decay_augmented_hamiltonian(base: &Operator, params: &PhysicalParams) -> Result<Operator> {
    check_rate("gamma", params.gamma)?;
    check_rate("kappa", params.kappa)?;
    if params.gamma == 0.0 && params.kappa == 0.0 {
        return Ok(base.clone());
    }
    let shape = base.shape();
    let damping = Operator::diagonal(shape, |flat| {
        let excited = (0..shape.n_atoms).filter(|&k| shape.level_of(flat, k) == AtomLevel::E).count();
        let loss = 0.5 * params.gamma * excited as f64 + 0.5 * params.kappa * shape.photons_of(flat) as f64;
        C64::new(0.0, -loss)
    });
    base.add(&damping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::BasisIndex;
    use alloc::vec;
    use AtomLevel::*;

    fn label(levels: &[AtomLevel], n: usize) -> BasisIndex {
        BasisIndex::new(levels.to_vec(), n)
    }

    fn two_atoms() -> Shape {
        Shape::new(2, 2).unwrap()
    }

    #[test]
    fn full_coupling_element() {
        let p = PhysicalParams::lossless(10.0);
        let h = full_hamiltonian(&p, &[0, 1], FrameChoice::RotatedFrame, two_atoms()).unwrap();
        assert_eq!(h.element(&label(&[G, G], 1), &label(&[E, G], 0)).unwrap(), C64::new(-1.0, 0.0));
        assert_eq!(h.element(&label(&[G, G], 1), &label(&[G, G], 1)).unwrap(), C64::new(-10.0, 0.0));
        // two-photon coupling carries sqrt(2)
        let two = h.element(&label(&[G, G], 2), &label(&[E, G], 1)).unwrap();
        assert!((two.re + libm::sqrt(2.0)).abs() < 1e-15);
        assert!(h.max_hermitian_deviation() < 1e-12);
    }

    #[test]
    fn full_without_active_atoms_has_no_coupling() {
        let p = PhysicalParams::lossless(10.0);
        let h = full_hamiltonian(&p, &[], FrameChoice::RotatedFrame, two_atoms()).unwrap();
        for r in 0..h.dim() {
            for c in 0..h.dim() {
                if r != c {
                    assert_eq!(h.get(r, c), C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn full_rejects_bad_atom() {
        let p = PhysicalParams::lossless(10.0);
        assert_eq!(
            full_hamiltonian(&p, &[0, 2], FrameChoice::RotatedFrame, two_atoms()).unwrap_err(),
            Error::InvalidAtom { index: 2, n_atoms: 2 }
        );
    }

    #[test]
    fn lab_frame_free_part() {
        let mut p = PhysicalParams::lossless(10.0);
        assert!(full_hamiltonian(&p, &[0], FrameChoice::LabFrame, two_atoms()).is_err());
        p.omega_e = Some(50.0);
        p.omega_g = Some(2.0);
        let h = full_hamiltonian(&p, &[0, 1], FrameChoice::LabFrame, two_atoms()).unwrap();
        // nu = 50 - 2 - 10
        let diag = h.element(&label(&[E, G], 1), &label(&[E, G], 1)).unwrap();
        assert!((diag.re - (38.0 + 50.0 + 2.0)).abs() < 1e-12);
        assert!(h.max_hermitian_deviation() < 1e-12);
    }

    #[test]
    fn effective_elements() {
        let p = PhysicalParams::lossless(10.0);
        let shape = Shape::new(3, 2).unwrap();
        let h = effective_hamiltonian(&p, (0, 2), shape).unwrap();
        let eta = p.eta();
        let el = |a: &[AtomLevel], b: &[AtomLevel]| h.element(&label(a, 0), &label(b, 0)).unwrap();
        assert!((el(&[E, Zero, G], &[G, Zero, E]).re - eta).abs() < 1e-15);
        assert!((el(&[E, One, One], &[E, One, One]).re - eta).abs() < 1e-15);
        assert!((el(&[E, Zero, Zero], &[E, Zero, Zero]).re - eta).abs() < 1e-15);
        assert_eq!(el(&[G, One, G], &[G, One, G]), C64::new(0.0, 0.0));
        assert!((el(&[E, Zero, E], &[E, Zero, E]).re - 2.0 * eta).abs() < 1e-15);
        // the dormant atom never participates
        assert_eq!(el(&[E, E, G], &[E, E, G]).re, eta);
        assert_eq!(h.max_hermitian_deviation(), 0.0);
        assert_eq!(effective_hamiltonian(&p, (1, 1), shape).unwrap_err(), Error::InvalidPair { index: 1 });
    }

    #[test]
    fn effective_conserves_excitation_number() {
        let p = PhysicalParams::lossless(7.0);
        let shape = Shape::new(3, 1).unwrap();
        let h = effective_hamiltonian(&p, (0, 2), shape).unwrap();
        let n_exc = Operator::diagonal(shape, |f| {
            C64::new((0..3).filter(|&k| shape.level_of(f, k) == E).count() as f64, 0.0)
        });
        assert!(h.commutator(&n_exc).unwrap().is_zero());
    }

    #[test]
    fn drive_elements() {
        let shape = two_atoms();
        let pulse = Pulse::new(&[0, 1], Transition::ZERO_G, 0.7, 1.1, 1.0).unwrap();
        let h = drive_hamiltonian(&pulse, shape).unwrap();
        let expected = C64::from_polar(-0.7, 1.1);
        assert_eq!(h.element(&label(&[G, Zero], 0), &label(&[Zero, Zero], 0)).unwrap(), expected);
        assert_eq!(h.element(&label(&[Zero, G], 0), &label(&[Zero, Zero], 0)).unwrap(), expected);
        assert_eq!(h.element(&label(&[Zero, Zero], 0), &label(&[G, Zero], 0)).unwrap(), expected.conj());
        assert_eq!(h.max_hermitian_deviation(), 0.0);

        let control = Pulse::new(&[0], Transition::ONE_E, 0.3, 2.0, 1.0).unwrap();
        let h = drive_hamiltonian(&control, shape).unwrap();
        assert_eq!(
            h.element(&label(&[E, One], 0), &label(&[One, One], 0)).unwrap(),
            C64::from_polar(-0.3, 2.0)
        );
        assert_eq!(h.element(&label(&[One, E], 0), &label(&[One, One], 0)).unwrap(), C64::new(0.0, 0.0));

        let off = Pulse::new(&[0], Transition::ZERO_G, 0.0, 0.0, 1.0).unwrap();
        assert!(drive_hamiltonian(&off, shape).unwrap().is_zero());
    }

    #[test]
    fn pulse_validation() {
        assert!(Pulse::new(&[], Transition::ZERO_G, 1.0, 0.0, 1.0).is_err());
        assert!(Pulse::new(&[0], Transition { from: G, to: G }, 1.0, 0.0, 1.0).is_err());
        assert!(Pulse::new(&[0], Transition::ZERO_G, -1.0, 0.0, 1.0).is_err());
        let p = Pulse::new(&[1, 0, 1], Transition::ZERO_G, 1.0, -FRAC_PI_2, 1.0).unwrap();
        assert_eq!(p.atoms(), &[0, 1]);
        assert!((p.phase() - PHASE_FORWARD).abs() < 1e-15);
        assert!((p.reversed().phase() - PHASE_BACKWARD).abs() < 1e-15);
        let out_of_range = Pulse::new(&[4], Transition::ZERO_G, 1.0, 0.0, 1.0).unwrap();
        assert!(drive_hamiltonian(&out_of_range, two_atoms()).is_err());
    }

    #[test]
    fn decay_terms() {
        let shape = two_atoms();
        let lossless = PhysicalParams::lossless(10.0);
        let base = full_hamiltonian(&lossless, &[0, 1], FrameChoice::RotatedFrame, shape).unwrap();
        assert_eq!(decay_augmented_hamiltonian(&base, &lossless).unwrap(), base);

        let p = PhysicalParams::new(10.0, 0.1, 0.01);
        let h = decay_augmented_hamiltonian(&base, &p).unwrap();
        assert!(!h.is_flagged_hermitian());
        let eg = h.element(&label(&[E, G], 0), &label(&[E, G], 0)).unwrap();
        assert!((eg.im + 0.005).abs() < 1e-15 && eg.re == 0.0);
        let gg1 = h.element(&label(&[G, G], 1), &label(&[G, G], 1)).unwrap();
        assert!((gg1.im + 0.05).abs() < 1e-15);
        assert!((gg1.re + 10.0).abs() < 1e-15);

        let bad = PhysicalParams::new(10.0, -0.1, 0.0);
        assert_eq!(
            decay_augmented_hamiltonian(&base, &bad).unwrap_err(),
            Error::InvalidRate { name: "kappa", value: -0.1 }
        );
    }

    /// Cyclic Jacobi rotations for a small real symmetric matrix.
    fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _ in 0..100 {
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for row in a.iter_mut() {
                        let (akp, akq) = (row[p], row[q]);
                        row[p] = c * akp - s * akq;
                        row[q] = s * akp + c * akq;
                    }
                    let (rp, rq) = (a[p].clone(), a[q].clone());
                    for k in 0..n {
                        a[p][k] = c * rp[k] - s * rq[k];
                        a[q][k] = s * rp[k] + c * rq[k];
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }

    #[test]
    fn single_excitation_spectrum_is_perturbative() {
        for delta in [10.0, 20.0, 50.0, 100.0] {
            let p = PhysicalParams::lossless(delta);
            let shape = two_atoms();
            let h = full_hamiltonian(&p, &[0, 1], FrameChoice::RotatedFrame, shape).unwrap();
            let sector = [label(&[E, G], 0), label(&[G, E], 0), label(&[G, G], 1)];
            let block: Vec<Vec<f64>> = sector
                .iter()
                .map(|r| sector.iter().map(|c| h.element(r, c).unwrap().re).collect())
                .collect();
            let eta = p.eta();
            let ev = symmetric_eigenvalues(block);
            let mut expected = vec![-delta - 2.0 * eta, 0.0, 2.0 * eta];
            expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let tol = 5.0 / (delta * delta);
            for (got, want) in ev.iter().zip(&expected) {
                assert!((got - want).abs() <= tol, "delta {delta}: {got} vs {want}");
            }
        }
    }
}
