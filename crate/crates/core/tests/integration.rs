use proptest::prelude::*;

use pfs_core::approx::{polynomial_error, theorem3_for_rep, SUPPORT_CAP};
use pfs_core::depth2::{build_symmetric, verify_depth2};
use pfs_core::nmqc::protocol_from_rep;
use pfs_core::periodic::{from_anf, from_fourier, from_mod4, lower_bound, Mod4Coefficients};
use pfs_core::{
    make_family, parse_function_spec, AnfPolynomial, BooleanFunction, Dyadic, FourierSpectrum,
    PeriodicRepresentation, SymmetricProfile,
};

fn d(s: &str) -> Dyadic {
    s.parse().unwrap()
}

fn fam(name: &str, params: &[usize]) -> BooleanFunction {
    make_family(name, params).unwrap()
}

// Spectra worked out by hand in the ±1 convention (output bit 1 is -1).
#[test]
fn frozen_spectra() {
    let maj = FourierSpectrum::wht(&fam("maj", &[3])).unwrap();
    for s in [0b001, 0b010, 0b100] {
        assert_eq!(maj.coeff(s), d("1/2"));
    }
    assert_eq!(maj.coeff(0b111), d("-1/2"));
    assert_eq!(maj.coeff(0), Dyadic::zero());

    let and2 = FourierSpectrum::wht(&fam("and", &[2])).unwrap();
    assert_eq!(and2.coeff(0), d("1/2"));
    assert_eq!(and2.coeff(0b01), d("1/2"));
    assert_eq!(and2.coeff(0b10), d("1/2"));
    assert_eq!(and2.coeff(0b11), d("-1/2"));

    // Mod^3_3 is true on 2 of 8 inputs, so the mean is (6 - 2) / 8.
    let mod3 = FourierSpectrum::wht(&fam("mod", &[3, 3])).unwrap();
    assert_eq!(mod3.coeff(0), d("1/2"));
    assert_eq!(mod3.coeff(0b011), d("-1/2"));
    assert_eq!(mod3.coeff(0b111), Dyadic::zero());
}

#[test]
fn frozen_sparsities() {
    // (spec, from_fourier sparsity, from_anf sparsity, lower bound)
    let table = [
        ("and:3", 7, 7, 7),
        ("or:3", 7, 7, 7),
        ("maj:3", 4, 6, 4),
        ("xor:4", 1, 4, 1),
        ("mod:3:3", 3, 3, 3),
        ("cq:4", 15, 10, 5),
    ];
    for (spec, fourier, anf, lb) in table {
        let f = parse_function_spec(spec).unwrap();
        assert_eq!(
            from_fourier(&f).unwrap().sparsity(),
            fourier,
            "{spec} fourier"
        );
        assert_eq!(from_anf(&f).unwrap().sparsity(), anf, "{spec} anf");
        assert_eq!(lower_bound(&f).unwrap().value, lb, "{spec} lower bound");
    }
}

#[test]
fn constructions_drive_protocols() {
    for spec in ["maj:5", "cq:5", "exact:2:4", "lsb:2:6"] {
        let f = parse_function_spec(spec).unwrap();
        for rep in [from_fourier(&f).unwrap(), from_anf(&f).unwrap()] {
            let p = protocol_from_rep(&rep).unwrap();
            assert_eq!(p.qubits(), rep.sparsity());
            assert_eq!(p.function().unwrap(), f, "{spec}");
        }
    }
}

fn arb_function(n: usize) -> impl Strategy<Value = BooleanFunction> {
    prop::collection::vec(any::<bool>(), 1 << n)
        .prop_map(move |bits| BooleanFunction::from_truth_table(n, bits).unwrap())
}

fn arb_profile() -> impl Strategy<Value = SymmetricProfile> {
    (1usize..=7).prop_flat_map(|n| {
        prop::collection::btree_set(0..=n, 0..=n + 1)
            .prop_map(move |accept| SymmetricProfile::new(n, accept).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(f in (1usize..=5).prop_flat_map(arb_function)) {
        for rep in [from_fourier(&f).unwrap(), from_anf(&f).unwrap()] {
            let text = serde_json::to_string(&rep).unwrap();
            let back: PeriodicRepresentation = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &rep);
            prop_assert!(back.verify(&f).unwrap().ok);
        }
    }

    #[test]
    fn lower_bound_below_constructions(f in (1usize..=6).prop_flat_map(arb_function)) {
        prop_assume!(!f.is_constant());
        let lb = lower_bound(&f).unwrap().value;
        prop_assert!(lb <= from_fourier(&f).unwrap().sparsity());
        prop_assert!(lb <= from_anf(&f).unwrap().sparsity());
    }

    #[test]
    fn depth2_on_symmetric_profiles(profile in arb_profile()) {
        let f = profile.to_function().unwrap();
        let p = build_symmetric(&profile).unwrap();
        prop_assert!(verify_depth2(&p, &f).unwrap().ok);
    }

    #[test]
    fn bit_polynomials_exact_on_exact_reps(
        (n, c) in (1usize..=5).prop_flat_map(|n| {
            let sets = prop::collection::btree_map(1u32..(1 << n), 0u8..4, 0..=4);
            (Just(n), sets)
        })
    ) {
        let c: Mod4Coefficients = c;
        let rep = from_mod4(n, &c).unwrap();
        prop_assume!(rep.sparsity() <= SUPPORT_CAP);
        let f = rep.function().unwrap();
        let pp = theorem3_for_rep(&rep).unwrap();
        prop_assert_eq!(polynomial_error(&pp, &f).unwrap(), 0.0);
        let atom = &pp.atoms[0];
        prop_assert_eq!(&atom.ys[atom.ell as usize], &AnfPolynomial::moebius(&f).unwrap());
    }
}
