//! Closed-form perturbative energies for the Yukawa potential.
//!
//! The potential is split into the Coulomb part −A/r (solved exactly) and the
//! remainder
//!
//!   ΔV(r) = Aδ − (Aδ²/2) r + (Aδ³/6) r² − (Aδ⁴/24) r³ + …
//!
//! whose constant term is carried separately as `shift_const` and whose
//! polynomial terms generate the first three order corrections. Every
//! closed form below is written with `N = n + l + 1` and `L = l(l + 1)` held
//! as `f64` so that high powers never touch integer arithmetic.

use std::fmt;

use thiserror::Error;

/// Default screening coefficient δ₀.
pub const DEFAULT_DELTA0: f64 = 0.98;

/// Hartree → eV as used for the published tables (2 Ry = 27.212 eV).
pub const DEFAULT_HARTREE_TO_EV: f64 = 27.212;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("atomic number must be at least 1, got {0}")]
    InvalidAtomicNumber(u32),
    #[error("coupling strength must be positive and finite, got {0}")]
    InvalidCoupling(f64),
    #[error("screening coefficient must be non-negative and finite, got {0}")]
    InvalidDelta0(f64),
    #[error("screening parameter must be non-negative and finite, got {0}")]
    InvalidDelta(f64),
    #[error("perturbation order must be 0, 1, 2 or 3, got {0}")]
    InvalidOrder(u8),
    #[error("hartree-to-eV factor must be positive and finite, got {0}")]
    InvalidConversion(f64),
}

/// A neutral atom: atomic number and the Coulomb coupling A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicSystem {
    z: u32,
    coupling: f64,
}

impl AtomicSystem {
    /// Atom with the atomic-unit identification A = Z.
    pub fn new(z: u32) -> Result<Self, SpectraError> {
        Self::with_coupling(z, f64::from(z))
    }

    pub fn with_coupling(z: u32, coupling: f64) -> Result<Self, SpectraError> {
        if z == 0 {
            return Err(SpectraError::InvalidAtomicNumber(z));
        }
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(SpectraError::InvalidCoupling(coupling));
        }
        Ok(Self { z, coupling })
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScreeningLaw {
    /// δ = δ₀ Z^{1/3}
    ThomasFermi,
    /// δ = δ₀ Z^{1/3} (1 − 1/Z)^{2/3}
    FermiAmaldi,
}

/// Z-dependence of the screening parameter together with its coefficient δ₀.
///
/// δ₀ = 0 is accepted and selects the pure Coulomb problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreeningModel {
    law: ScreeningLaw,
    delta0: f64,
}

impl ScreeningModel {
    pub fn new(law: ScreeningLaw, delta0: f64) -> Result<Self, SpectraError> {
        if !(delta0.is_finite() && delta0 >= 0.0) {
            return Err(SpectraError::InvalidDelta0(delta0));
        }
        Ok(Self { law, delta0 })
    }

    pub fn thomas_fermi() -> Self {
        Self { law: ScreeningLaw::ThomasFermi, delta0: DEFAULT_DELTA0 }
    }

    pub fn fermi_amaldi() -> Self {
        Self { law: ScreeningLaw::FermiAmaldi, delta0: DEFAULT_DELTA0 }
    }

    pub fn law(&self) -> ScreeningLaw {
        self.law
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }
}

impl Default for ScreeningModel {
    fn default() -> Self {
        Self::fermi_amaldi()
    }
}

/// Radial quantum number `n` (node count) and orbital quantum number `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumState {
    pub n: u32,
    pub l: u32,
}

impl QuantumState {
    pub const fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }

    /// N = n + l + 1.
    pub fn principal(&self) -> f64 {
        f64::from(self.n) + f64::from(self.l) + 1.0
    }

    /// L = l(l + 1).
    pub fn centrifugal(&self) -> f64 {
        let l = f64::from(self.l);
        l * (l + 1.0)
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, l={})", self.n, self.l)
    }
}

/// Highest perturbation order included in a total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Zeroth = 0,
    First = 1,
    Second = 2,
    Third = 3,
}

impl Order {
    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Order {
    type Error = SpectraError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        match value {
            0 => Ok(Order::Zeroth),
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            3 => Ok(Order::Third),
            other => Err(SpectraError::InvalidOrder(other)),
        }
    }
}

/// Per-order decomposition of a level energy, all in Hartree.
///
/// Terms beyond `order_used` are stored as zero, so `total` is always the
/// plain sum of the five components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub delta: f64,
    pub e0: f64,
    pub shift_const: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub total: f64,
    pub order_used: Order,
    /// Set when the summed corrections exceed half of |E⁽⁰⁾|, a sign that the
    /// series is no longer trustworthy for this level.
    pub series_warning: bool,
}

impl EnergyBreakdown {
    pub fn corrections(&self) -> f64 {
        self.e1 + self.e2 + self.e3
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    hartree_to_ev: f64,
}

impl UnitSystem {
    pub fn new(hartree_to_ev: f64) -> Result<Self, SpectraError> {
        if !(hartree_to_ev.is_finite() && hartree_to_ev > 0.0) {
            return Err(SpectraError::InvalidConversion(hartree_to_ev));
        }
        Ok(Self { hartree_to_ev })
    }

    pub fn hartree_to_ev(&self) -> f64 {
        self.hartree_to_ev
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { hartree_to_ev: DEFAULT_HARTREE_TO_EV }
    }
}

/// Screening parameter δ (inverse Bohr) for atomic number `z`.
pub fn screening_delta(z: u32, model: &ScreeningModel) -> Result<f64, SpectraError> {
    if z == 0 {
        return Err(SpectraError::InvalidAtomicNumber(z));
    }
    let z = f64::from(z);
    let thomas_fermi = model.delta0 * z.cbrt();
    Ok(match model.law {
        ScreeningLaw::ThomasFermi => thomas_fermi,
        ScreeningLaw::FermiAmaldi => thomas_fermi * (1.0 - 1.0 / z).powf(2.0 / 3.0),
    })
}

/// Unperturbed Coulomb level −A²/(2N²).
pub fn coulomb_energy(coupling: f64, state: QuantumState) -> f64 {
    let n = state.principal();
    -coupling * coupling / (2.0 * n * n)
}

/// E⁽¹⁾ = −(3N² − L) δ² / 4, independent of A.
pub fn first_order_shift(state: QuantumState, delta: f64) -> f64 {
    let n = state.principal();
    -(3.0 * n * n - state.centrifugal()) * delta * delta / 4.0
}

/// E⁽²⁾ = N²(5N² − 3L + 1) δ³/(12A) − N⁴(5N² − 3L + 1) δ⁴/(16A²).
pub fn second_order_shift(coupling: f64, state: QuantumState, delta: f64) -> f64 {
    let (cubic, quartic) = second_order_terms(coupling, state, delta);
    cubic + quartic
}

/// The δ³ and δ⁴ monomials of E⁽²⁾, in that order. The first is never
/// negative, the second never positive.
pub fn second_order_terms(coupling: f64, state: QuantumState, delta: f64) -> (f64, f64) {
    let n2 = state.principal().powi(2);
    let bracket = 5.0 * n2 - 3.0 * state.centrifugal() + 1.0;
    let a = coupling;
    (n2 * bracket * delta.powi(3) / (12.0 * a), -n2 * n2 * bracket * delta.powi(4) / (16.0 * a * a))
}

/// E⁽³⁾, the three monomials in δ⁴, δ⁵ and δ⁶.
pub fn third_order_shift(coupling: f64, state: QuantumState, delta: f64) -> f64 {
    let n2 = state.principal().powi(2);
    let l = state.centrifugal();
    let p = 5.0 * n2 - 3.0 * l;
    let q = p + 1.0;
    let s = 9.0 * n2 - 5.0 * l;
    let a = coupling;
    -n2 * p * q * delta.powi(4) / (96.0 * a * a) + n2 * n2 * q * s * delta.powi(5) / (48.0 * a.powi(3))
        - n2.powi(3) * q * s * delta.powi(6) / (64.0 * a.powi(4))
}

/// Breakdown for an explicit coupling and screening parameter.
pub fn energy_breakdown(
    coupling: f64,
    delta: f64,
    state: QuantumState,
    order: Order,
) -> Result<EnergyBreakdown, SpectraError> {
    if !(coupling.is_finite() && coupling > 0.0) {
        return Err(SpectraError::InvalidCoupling(coupling));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(SpectraError::InvalidDelta(delta));
    }
    let e0 = coulomb_energy(coupling, state);
    let include = |k: Order, value: f64| if order >= k { value } else { 0.0 };
    let shift_const = include(Order::First, coupling * delta);
    let e1 = include(Order::First, first_order_shift(state, delta));
    let e2 = include(Order::Second, second_order_shift(coupling, state, delta));
    let e3 = include(Order::Third, third_order_shift(coupling, state, delta));
    let total = e0 + shift_const + e1 + e2 + e3;
    Ok(EnergyBreakdown {
        delta,
        e0,
        shift_const,
        e1,
        e2,
        e3,
        total,
        order_used: order,
        series_warning: (e1 + e2 + e3).abs() > 0.5 * e0.abs(),
    })
}

/// Total level energy E = E⁽⁰⁾ + Aδ + E⁽¹⁾ + E⁽²⁾ + E⁽³⁾ through `order`.
pub fn total_energy(
    system: &AtomicSystem,
    model: &ScreeningModel,
    state: QuantumState,
    order: Order,
) -> Result<EnergyBreakdown, SpectraError> {
    let delta = screening_delta(system.z, model)?;
    energy_breakdown(system.coupling, delta, state, order)
}

pub fn to_kev(hartree: f64, units: &UnitSystem) -> f64 {
    hartree * units.hartree_to_ev / 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const FA_Z3: f64 = 1.078_630;

    #[test]
    fn screening_examples() {
        let fa = ScreeningModel::fermi_amaldi();
        let tf = ScreeningModel::thomas_fermi();
        assert_eq!(screening_delta(1, &fa).unwrap(), 0.0);
        assert!((screening_delta(3, &fa).unwrap() - 1.078_630).abs() < 1e-6);
        assert!((screening_delta(3, &tf).unwrap() - 1.413_405).abs() < 1e-6);
        assert_eq!(screening_delta(0, &fa), Err(SpectraError::InvalidAtomicNumber(0)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(AtomicSystem::new(0).is_err());
        assert!(AtomicSystem::with_coupling(3, 0.0).is_err());
        assert!(AtomicSystem::with_coupling(3, f64::NAN).is_err());
        assert!(ScreeningModel::new(ScreeningLaw::FermiAmaldi, -0.1).is_err());
        assert!(UnitSystem::new(0.0).is_err());
        assert_eq!(Order::try_from(4), Err(SpectraError::InvalidOrder(4)));
        assert!(energy_breakdown(1.0, -1.0, QuantumState::new(0, 0), Order::Third).is_err());
    }

    #[test]
    fn coulomb_examples() {
        assert_eq!(coulomb_energy(3.0, QuantumState::new(0, 0)), -4.5);
        assert_eq!(coulomb_energy(1.0, QuantumState::new(1, 0)), -0.125);
        assert_eq!(coulomb_energy(29.0, QuantumState::new(0, 1)), -105.125);
    }

    #[test]
    fn first_order_examples() {
        let s = QuantumState::new(0, 0);
        assert_eq!(first_order_shift(s, 0.0), 0.0);
        assert!((first_order_shift(s, FA_Z3) + 0.872_581).abs() < 1e-5);
        assert_eq!(first_order_shift(QuantumState::new(1, 0), 1.0), -3.0);
    }

    #[test]
    fn second_order_examples() {
        let s = QuantumState::new(0, 0);
        assert_eq!(second_order_shift(3.0, s, 0.0), 0.0);
        assert!((second_order_shift(3.0, s, FA_Z3) - 0.152_754).abs() < 1e-5);
        assert!((second_order_shift(1.0, QuantumState::new(0, 1), 0.1) - 0.0035).abs() < 1e-12);
    }

    #[test]
    fn third_order_examples() {
        let s = QuantumState::new(0, 0);
        assert_eq!(third_order_shift(3.0, s, 0.0), 0.0);
        assert!((third_order_shift(3.0, s, FA_Z3) + 0.002_570).abs() < 1e-5);
        assert!((third_order_shift(2.0, s, 0.5) + 0.001_312).abs() < 2e-6);
    }

    #[test]
    fn total_energy_table_rows() {
        let units = UnitSystem::default();
        let fa = ScreeningModel::fermi_amaldi();
        let s = QuantumState::new(0, 0);

        let li = total_energy(&AtomicSystem::new(3).unwrap(), &fa, s, Order::Third).unwrap();
        assert!((li.total + 1.986_32).abs() < 1e-3);
        assert_relative_eq!(to_kev(li.total, &units), -0.054_056_87, max_relative = 1e-6);

        let po = total_energy(&AtomicSystem::new(84).unwrap(), &fa, s, Order::Third).unwrap();
        assert_relative_eq!(to_kev(po.total, &units), -86.629_718, max_relative = 1e-4);

        let coulomb = ScreeningModel::new(ScreeningLaw::FermiAmaldi, 0.0).unwrap();
        let b = total_energy(&AtomicSystem::new(5).unwrap(), &coulomb, s, Order::Third).unwrap();
        assert_eq!(b.total, -12.5);
    }

    #[test]
    fn order_truncation_zeroes_excluded_terms() {
        let s = QuantumState::new(0, 0);
        let zeroth = energy_breakdown(3.0, FA_Z3, s, Order::Zeroth).unwrap();
        assert_eq!(zeroth.total, -4.5);
        assert_eq!(zeroth.shift_const, 0.0);
        let first = energy_breakdown(3.0, FA_Z3, s, Order::First).unwrap();
        assert_eq!(first.shift_const, 3.0 * FA_Z3);
        assert_eq!(first.e2, 0.0);
        assert_eq!(first.e3, 0.0);
    }

    #[test]
    fn to_kev_examples() {
        let units = UnitSystem::default();
        assert_relative_eq!(to_kev(-1.0, &units), -0.027_212);
        assert_eq!(to_kev(0.0, &units), 0.0);
        assert!((to_kev(-1.986_32, &units) + 0.054_05).abs() < 1e-5);
    }

    #[test]
    fn series_warning_on_z9_l_shell() {
        let fa = ScreeningModel::fermi_amaldi();
        let f = total_energy(&AtomicSystem::new(9).unwrap(), &fa, QuantumState::new(1, 0), Order::Third).unwrap();
        assert!(f.series_warning);
        let k = total_energy(&AtomicSystem::new(29).unwrap(), &fa, QuantumState::new(0, 0), Order::Third).unwrap();
        assert!(!k.series_warning);
    }

    // Independent encodings of the n = 0, 1, 2 special cases, written with the
    // shifted principal numbers N₀ = l+1, N₁ = l+2, N₂ = l+3.
    fn ground_state_terms(a: f64, l: f64, d: f64) -> (f64, f64, f64) {
        let n0 = l + 1.0;
        let ll = l * (l + 1.0);
        special_terms(a, n0, ll, d)
    }

    fn special_terms(a: f64, nk: f64, ll: f64, d: f64) -> (f64, f64, f64) {
        let e1 = -(3.0 * nk.powi(2) - ll) * d.powi(2) / 4.0;
        let e2 = nk.powi(2) * (5.0 * nk.powi(2) - 3.0 * ll + 1.0) * d.powi(3) / (12.0 * a)
            - nk.powi(4) * (5.0 * nk.powi(2) - 3.0 * ll + 1.0) * d.powi(4) / (16.0 * a.powi(2));
        let e3 = -nk.powi(2) * (5.0 * nk.powi(2) - 3.0 * ll) * (5.0 * nk.powi(2) - 3.0 * ll + 1.0) * d.powi(4)
            / (96.0 * a.powi(2))
            + nk.powi(4) * (5.0 * nk.powi(2) - 3.0 * ll + 1.0) * (9.0 * nk.powi(2) - 5.0 * ll) * d.powi(5)
                / (48.0 * a.powi(3))
            - nk.powi(6) * (5.0 * nk.powi(2) - 3.0 * ll + 1.0) * (9.0 * nk.powi(2) - 5.0 * ll) * d.powi(6)
                / (64.0 * a.powi(4));
        (e1, e2, e3)
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn general_formulas_match_specialised_ones() {
        for l in 0..=3u32 {
            for &d in &[0.1, 0.5, 1.0] {
                for &a in &[1.0, 3.0, 10.0] {
                    let lf = f64::from(l);
                    let ll = lf * (lf + 1.0);
                    let cases = [
                        (0, ground_state_terms(a, lf, d)),
                        (1, special_terms(a, lf + 2.0, ll, d)),
                        (2, special_terms(a, lf + 3.0, ll, d)),
                    ];
                    for (n, (e1, e2, e3)) in cases {
                        let s = QuantumState::new(n, l);
                        assert!(close(first_order_shift(s, d), e1, 1e-12), "{s} d={d} a={a}");
                        assert!(close(second_order_shift(a, s, d), e2, 1e-12), "{s} d={d} a={a}");
                        assert!(close(third_order_shift(a, s, d), e3, 1e-12), "{s} d={d} a={a}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn coulomb_limit(a in 0.1f64..100.0, n in 0u32..6, l in 0u32..6) {
            let s = QuantumState::new(n, l);
            let b = energy_breakdown(a, 0.0, s, Order::Third).unwrap();
            prop_assert_eq!(b.total, coulomb_energy(a, s));
            prop_assert_eq!(b.shift_const, 0.0);
            prop_assert_eq!(b.e1, 0.0);
            prop_assert_eq!(b.e2, 0.0);
            prop_assert_eq!(b.e3, 0.0);
        }

        #[test]
        fn sign_structure(a in 0.1f64..100.0, d in 0.0f64..10.0, n in 0u32..6, l in 0u32..6) {
            let s = QuantumState::new(n, l);
            prop_assert!(coulomb_energy(a, s) < 0.0);
            prop_assert!(first_order_shift(s, d) <= 0.0);
            let (cubic, quartic) = second_order_terms(a, s, d);
            prop_assert!(cubic >= 0.0);
            prop_assert!(quartic <= 0.0);
            let n2 = s.principal().powi(2);
            if d <= 4.0 * a / (3.0 * n2) {
                prop_assert!(second_order_shift(a, s, d) >= -1e-15 * cubic);
            }
        }

        #[test]
        fn breakdown_sums(a in 0.1f64..100.0, d in 0.0f64..5.0, n in 0u32..4, l in 0u32..4, k in 0u8..4) {
            let b = energy_breakdown(a, d, QuantumState::new(n, l), Order::try_from(k).unwrap()).unwrap();
            prop_assert_eq!(b.total, b.e0 + b.shift_const + b.e1 + b.e2 + b.e3);
        }
    }

    #[test]
    fn degree_two_scaling() {
        for &s in &[2.0, 10.0] {
            for n in 0..3 {
                for l in 0..3 {
                    let st = QuantumState::new(n, l);
                    let base = energy_breakdown(3.0, 0.4, st, Order::Third).unwrap();
                    let scaled = energy_breakdown(3.0 * s, 0.4 * s, st, Order::Third).unwrap();
                    let pairs = [
                        (base.e0, scaled.e0),
                        (base.shift_const, scaled.shift_const),
                        (base.e1, scaled.e1),
                        (base.e2, scaled.e2),
                        (base.e3, scaled.e3),
                        (base.total, scaled.total),
                    ];
                    for (b, sc) in pairs {
                        assert!(close(sc, s * s * b, 1e-12), "{st} s={s}: {sc} vs {}", s * s * b);
                    }
                }
            }
        }
    }
}
