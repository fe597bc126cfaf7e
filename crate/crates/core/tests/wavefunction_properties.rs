use proptest::prelude::*;
use yukawa_core::{
    coulomb_chi, full_wavefunction, moderating_u, quadrature::integrate_default, AtomicSystem, QuantumState,
    WavefunctionError,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coulomb_functions_are_normalized(z in 1u32..=92, n in 0u32..=3, l in 0u32..=3) {
        let st = QuantumState::new(n, l);
        let chi = coulomb_chi(&AtomicSystem::new(z).unwrap(), st).unwrap();
        let norm = integrate_default(|r| chi.value(r).powi(2), 0.0, chi.r_max()).unwrap().value;
        prop_assert!((norm - 1.0).abs() < 1e-8);
        prop_assert_eq!(chi.nodes(), n as usize);
    }

    #[test]
    fn full_wavefunction_normalized_when_defined(z in 2u32..=92, n in 0u32..=2, l in 0u32..=2, frac in 0.01f64..0.3) {
        let st = QuantumState::new(n, l);
        let system = AtomicSystem::new(z).unwrap();
        let delta = frac * f64::from(z);
        match full_wavefunction(&system, st, delta) {
            Ok(psi) => {
                let norm = integrate_default(|r| psi.value(r).powi(2), 0.0, psi.r_max()).unwrap().value;
                prop_assert!((norm - 1.0).abs() < 1e-8);
            }
            Err(WavefunctionError::NonNormalizable { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn moderating_factor_tends_to_one(a in 1.0f64..92.0, n in 0u32..=3, l in 0u32..=3, r in 0.0f64..20.0) {
        let st = QuantumState::new(n, l);
        prop_assert!((moderating_u(a, st, 1e-7, r) - 1.0).abs() < 1e-6);
        prop_assert_eq!(moderating_u(a, st, 0.0, r), 1.0);
    }
}
