mod common;

use std::collections::BTreeMap;

use nilgeo::cohomology::{self, holomorphic_forms_closed};
use nilgeo::exterior::{Form, HermitianMatrix, Mono};
use nilgeo::frolicher;
use nilgeo::kuranishi::{self, VectorForm};
use nilgeo::metrics::{self, exclusion_pairing, MetricKind, SearchOptions, Verdict};
use nilgeo::scalars::{rat, rationalize, GaussRational, ParamPoly};
use nilgeo::structeq::{parse_manifold, ComplexNilmanifold};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gauss() -> impl Strategy<Value = GaussRational> {
    (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3).prop_map(|(a, b, c, d)| GaussRational::new(rat(a, b), rat(c, d)))
}

fn poly() -> impl Strategy<Value = ParamPoly> {
    let term = (gauss(), prop::collection::vec((0usize..3, any::<bool>()), 0..3));
    prop::collection::vec(term, 0..4).prop_map(|terms| {
        let names = ["t11", "t12", "s"];
        terms.into_iter().fold(ParamPoly::zero(), |acc, (c, vars)| {
            let mono = vars.into_iter().fold(ParamPoly::constant(c), |m, (v, conj)| {
                m.mul(&if conj { ParamPoly::conj_var(names[v]) } else { ParamPoly::var(names[v]) })
            });
            acc.add(&mono)
        })
    })
}

fn manifold_from_seed(seed: u64, n: usize) -> ComplexNilmanifold {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(m) = common::random_manifold(&mut rng, n) {
            return m;
        }
    }
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> Form<GaussRational> {
    let mut f = Form::zero(n);
    for _ in 0..terms {
        let mono = Mono(rng.random_range(0..(1u32 << (2 * n))));
        let c = GaussRational::new(rat(rng.random_range(-3..=3), 1), rat(rng.random_range(-3..=3), 2));
        f.add_term(mono, c);
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&ParamPoly::one()), a.clone());
    }

    #[test]
    fn poly_conjugation_is_an_involution(a in poly(), b in poly()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        prop_assert_eq!(a.add(&b).conj(), a.conj().add(&b.conj()));
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), x in gauss(), y in gauss(), z in gauss()) {
        let point = BTreeMap::from([("t11".to_string(), x), ("t12".to_string(), y), ("s".to_string(), z)]);
        let ea = a.eval(&point).unwrap();
        let eb = b.eval(&point).unwrap();
        prop_assert_eq!(a.mul(&b).eval(&point).unwrap(), &ea * &eb);
        prop_assert_eq!(a.add(&b).eval(&point).unwrap(), &ea + &eb);
        prop_assert_eq!(a.conj().eval(&point).unwrap(), ea.conj());
    }

    #[test]
    fn gauss_field_axioms(a in gauss(), b in gauss()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
        prop_assert!((&a * &a.conj()).is_real());
    }

    #[test]
    fn rationalize_recovers_small_fractions(p in -200i64..200, q in 1i64..200) {
        prop_assert_eq!(rationalize(p as f64 / q as f64, 1000), rat(p, q));
    }

    #[test]
    fn leibniz_and_conjugation(seed in any::<u64>(), n in 1usize..=3) {
        let m = manifold_from_seed(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let a = random_form(&mut rng, n, 3);
        let b = random_form(&mut rng, n, 3);
        let d = m.diff();
        prop_assert!(d.d(&d.d(&a)).is_zero());
        for k in 0..=2 * n {
            let ak = a.degree_component(k);
            let lhs = d.d(&ak.wedge(&b));
            let sign = if k % 2 == 1 { GaussRational::int(-1) } else { GaussRational::one() };
            let rhs = d.d(&ak).wedge(&b).add(&ak.wedge(&d.d(&b)).scale(&sign));
            prop_assert_eq!(lhs, rhs);
        }
        prop_assert_eq!(d.d(&a.conj()), d.d(&a).conj());
        prop_assert_eq!(d.d(&a), d.del(&a).add(&d.delbar(&a)));
        prop_assert!(d.delbar(&d.delbar(&a)).is_zero());
        prop_assert!(d.del(&d.del(&a)).is_zero());
    }

    #[test]
    fn printed_equations_parse_back(seed in any::<u64>(), n in 1usize..=4) {
        let m = manifold_from_seed(seed, n);
        let text = m.eqs().to_string();
        let parsed = parse_manifold(&text).unwrap();
        prop_assert_eq!(&parsed, m.eqs());
        prop_assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn hermitian_forms_round_trip(entries in prop::collection::vec(gauss(), 6)) {
        let n = 3;
        let mut h = HermitianMatrix::zero(n);
        let mut it = entries.into_iter();
        for j in 0..n {
            for k in j..n {
                let c = it.next().unwrap();
                if j == k {
                    h.entries[j][j] = GaussRational::real(c.re.clone());
                } else {
                    h.entries[j][k] = c.clone();
                    h.entries[k][j] = c.conj();
                }
            }
        }
        prop_assert_eq!(Form::from_hermitian_11(&h).hermitian_of_11().unwrap(), h.clone());
        prop_assert_eq!(Form::from_hermitian_n1n1(&h).hermitian_of_n1n1().unwrap(), h.clone());
        prop_assert!(Form::from_hermitian_11(&h).is_real());
        prop_assert_eq!(HermitianMatrix::from_real_coords(n, &h.to_real_coords()), h.clone());
        if h.is_positive_definite() {
            prop_assert!(h.is_positive_semidefinite());
        }
    }

    #[test]
    fn bracket_is_symmetric_on_01_forms(coeffs in prop::collection::vec(gauss(), 18)) {
        let m = common::iwasawa();
        let mk = |cs: &[GaussRational]| {
            let mut v = VectorForm::zero(3);
            for i in 1..=3 {
                for l in 1..=3 {
                    v = v.add(&VectorForm::basis_element(3, i, l, ParamPoly::constant(cs[(i - 1) * 3 + l - 1].clone())));
                }
            }
            v
        };
        let psi = mk(&coeffs[..9]);
        let tau = mk(&coeffs[9..]);
        prop_assert_eq!(kuranishi::kuranishi_bracket(&m, &psi, &tau), kuranishi::kuranishi_bracket(&m, &tau, &psi));
        let half = kuranishi::kuranishi_bracket(&m, &psi, &psi);
        prop_assert!(kuranishi::delbar_vector(&m, &half).unwrap().is_zero());
    }
}

#[test]
fn corpus_frolicher_inequality_and_euler() {
    for (name, m) in common::corpus() {
        let p = frolicher::pages(&m, None);
        assert!(p.consistent, "{name}");
        for d in frolicher::check_inequality(&m) {
            assert!(d.betti <= d.hodge_sum, "{name}: k = {}", d.k);
        }
        assert!(p.euler.windows(2).all(|w| w[0] == w[1]), "{name}: {:?}", p.euler);
        assert_eq!(p.pages[0], cohomology::dolbeault(&m).table(), "{name}");
    }
}

#[test]
fn corpus_holomorphic_top_minus_one_forms_closed() {
    for (name, m) in common::corpus() {
        assert!(holomorphic_forms_closed(&m), "{name}");
    }
}

#[test]
fn corpus_metric_exclusion_never_fires() {
    let opts = SearchOptions { budget: 4_000, seed: 7 };
    for (name, m) in common::corpus() {
        let c = metrics::classify(&m, opts).unwrap_or_else(|e| panic!("{name}: {e}"));
        let g = c.report(MetricKind::Gauduchon);
        assert_eq!(g.verdict, Verdict::Witness, "{name}: gauduchon");
        for r in &c.reports {
            if let Some(w) = &r.witness {
                assert!(metrics::verify_witness(&m, r.kind, w), "{name}: {}", r.kind);
            }
            if let Some(cert) = &r.certificate {
                assert!(metrics::verify_certificate(&m, r.kind, cert), "{name}: {}", r.kind);
            }
        }
        // pair every verified certificate with random exact members of its condition subspace
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in &c.reports {
            let Some(cert) = &r.certificate else { continue };
            let space = metrics::condition_subspace(&m, r.kind);
            for _ in 0..20 {
                let w = space.closed_forms.iter().fold(Form::zero(m.n()), |acc, f| {
                    acc.add(&f.scale(&GaussRational::int(rng.random_range(-5..=5))))
                });
                let e = exclusion_pairing(&m, r.kind, &w, cert);
                assert!(e.stokes.is_zero(), "{name}: {} pairing {}", r.kind, e.stokes);
                assert!(!e.fires(), "{name}: {}", r.kind);
            }
        }
    }
}

#[test]
fn corpus_kodaira_matches_dolbeault() {
    for (name, m) in common::corpus() {
        if !m.flags().parallelisable {
            assert!(kuranishi::count_closed_oneforms(&m).is_err(), "{name}");
            continue;
        }
        let oracle = common::Oracle::new(&m);
        let r = kuranishi::count_closed_oneforms(&m).unwrap();
        assert_eq!(r, oracle.closed_holomorphic_one_forms(), "{name}");
        let k = kuranishi::kodaira_h01(&m).unwrap();
        assert_eq!(k.r, r, "{name}");
        assert_eq!(k.r, cohomology::dolbeault(&m).dim(0, 1), "{name}");
        assert_eq!(kuranishi::tangent_h01_basis(&m).unwrap().len(), m.n() * r, "{name}");
        let sol = kuranishi::solve_maurer_cartan(&m, None).unwrap();
        if sol.obstruction.is_none() {
            assert!(kuranishi::verify_integrability(&sol.manifold, &sol.psi), "{name}");
        }
        assert!(sol.bianchi_ok, "{name}");
    }
}

#[test]
fn corpus_cohomology_matches_oracle() {
    for (name, m) in common::corpus() {
        let oracle = common::Oracle::new(&m);
        assert_eq!(cohomology::derham(&m).betti(), oracle.betti(), "{name}");
        assert_eq!(cohomology::dolbeault(&m).table(), oracle.hodge(), "{name}");
    }
}

#[test]
fn deformations_keep_betti_numbers() {
    let m = common::iwasawa();
    let psi = nilgeo::deform::iwasawa_psi();
    let base = cohomology::derham(&m).betti();
    for (name, value) in [("t12", rat(1, 10)), ("t11", rat(1, 3)), ("t21", rat(-1, 2)), ("t32", rat(2, 1))] {
        let point = BTreeMap::from([(name.to_string(), GaussRational::real(value))]);
        let d = nilgeo::deform::deformed_structure(&m, &psi, &point).unwrap();
        assert_eq!(cohomology::derham(&d.manifold).betti(), base, "{name}");
    }
}
