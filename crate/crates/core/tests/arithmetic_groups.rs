mod common;

use common::*;
use num_traits::Zero;
use qvahlen::groups::*;
use qvahlen::order::{conjugate_order, invariant_report, plus_part, OrderLattice};
use qvahlen::quaternion::Quaternion;
use qvahlen::scalars::{frac, rat, Field, QuadExt, Rational};
use qvahlen::vahlen::{build_diag_conjugator, is_member, Mat2, VahlenMatrix, CLAUSE_DET};
use qvahlen::Involution;

fn sqrt3_certificate() -> ConjugacyCertificate {
    let h = h23();
    let inv = inv_negating_j(&h);
    let gamma = member(&inv, sqrt3_conjugator(&inv));
    ConjugacyCertificate::new(gamma, half_j_order(&h), twisted_order_23(&h)).unwrap()
}

#[test]
fn sqrt3_conjugator_is_a_member_and_certifies_both_ways() {
    let h = h23();
    let inv = inv_negating_j(&h);
    assert!(is_member(&inv, &sqrt3_conjugator(&inv)).unwrap().member);
    let cert = sqrt3_certificate();
    assert_eq!(cert.field(), Some(3));
    let forward = verify_conjugacy_certificate(&cert).unwrap();
    assert!(forward.valid, "{:?}", forward.first_failure());
    assert_eq!(forward.checks.len(), 10);
    assert!(verify_conjugacy_certificate(&cert.inverse()).unwrap().valid);
    // the orders themselves are not isomorphic
    let r1 = invariant_report(cert.source(), &inv).unwrap();
    let r2 = invariant_report(cert.target(), &inv).unwrap();
    assert!(!r1.differences(&r2).is_empty());
}

#[test]
fn transposed_sqrt3_conjugator_also_certifies() {
    let h = h23();
    let inv = inv_negating_j(&h);
    let g = sqrt3_conjugator(&inv);
    let t = Mat2::new(g.a.clone(), g.c.clone(), g.b.clone(), g.d.clone()).unwrap();
    assert!(is_member(&inv, &t).unwrap().member);
    let cert = ConjugacyCertificate::new(member(&inv, t), half_j_order(&h), twisted_order_23(&h)).unwrap();
    assert!(verify_conjugacy_certificate(&cert).unwrap().valid);
}

#[test]
fn sign_flipped_sqrt3_conjugator_is_not_a_member() {
    let h = h23();
    let inv = inv_negating_j(&h);
    let mut g = sqrt3_conjugator(&inv);
    g.b = -&g.b;
    let report = is_member(&inv, &g).unwrap();
    assert_eq!(report.violations, vec![CLAUSE_DET.to_string()]);
    assert!(matches!(VahlenMatrix::new(&inv, g), Err(qvahlen::Error::NotMember(_))));
}

#[test]
fn five_matrix_units_generate_and_their_conjugates_too() {
    let cert = sqrt3_certificate();
    let gens = matrix_ring_generators(cert.source());
    assert_eq!(gens.len(), 5);
    assert!(generate_matrix_ring(&gens, cert.source()).unwrap().equals_full);
    let images: Vec<Mat2<Rational>> = gens
        .iter()
        .map(|g| cert.gamma().conjugate(&g.lift()).unwrap().to_rational().unwrap())
        .collect();
    assert!(generate_matrix_ring(&images, cert.target()).unwrap().equals_full);
}

#[test]
fn unipotent_witnesses_generate_the_full_matrix_ring() {
    let h = h23();
    let inv = inv_negating_j(&h);
    let o1 = half_j_order(&h);
    let mut gens = Vec::new();
    for row in plus_part(&o1, &inv).unwrap().basis() {
        let z = Quaternion::from_vec(h.clone(), &row).unwrap();
        for m in [VahlenMatrix::upper(&inv, &z).unwrap(), VahlenMatrix::lower(&inv, &z).unwrap()] {
            assert!(is_integral_member(&m, &o1).unwrap());
            gens.push(m.matrix().clone());
        }
    }
    let d = VahlenMatrix::diagonal(&inv, &h.basis_element(1)).unwrap();
    assert!(is_integral_member(&d, &o1).unwrap());
    gens.push(d.matrix().clone());
    let g = generate_matrix_ring(&gens, &o1).unwrap();
    assert!(g.equals_full);
    assert_eq!(g.ring, MatrixRingLattice::full(&o1).unwrap());
    assert!(g.ranks.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(*g.ranks.last().unwrap(), 16);
}

#[test]
fn generation_is_monotone_in_the_generator_set() {
    let h = h23();
    let inv = inv_negating_j(&h);
    let o1 = half_j_order(&h);
    let z = h.basis_element(1);
    let small = vec![VahlenMatrix::upper(&inv, &z).unwrap().matrix().clone()];
    let mut large = small.clone();
    large.push(VahlenMatrix::lower(&inv, &z).unwrap().matrix().clone());
    let a = generate_matrix_ring(&small, &o1).unwrap().ring;
    let b = generate_matrix_ring(&large, &o1).unwrap().ring;
    assert!(b.lattice().contains_lattice(a.lattice()));
    assert!(a.is_multiplicatively_closed() && b.is_multiplicatively_closed());
    assert!(a.rank() < b.rank());
}

#[test]
fn root_two_conjugator_between_trace_distinguished_orders() {
    let h = alg(-1, -7);
    let inv = inv_negating_ij(&h);
    let o1 = half_j_order(&h);
    let o2 = swapped_order_7(&h);
    let u = q(&h, [1, 1, 0, 0], 1);
    assert_eq!(conjugate_order(&u, &o1).unwrap().lattice(), o2.lattice());
    let gamma = build_diag_conjugator(&inv, &u).unwrap();
    let r = QuadExt::new(2, rat(0), frac(1, 2)).unwrap();
    assert_eq!(gamma.matrix().a, q(&h, [1, 1, 0, 0], 1).to_ext().scale(&r));
    assert_eq!(gamma.matrix().d, q(&h, [1, -1, 0, 0], 1).to_ext().scale(&r));
    let cert = ConjugacyCertificate::new(gamma, o1.clone(), o2.clone()).unwrap();
    assert!(verify_conjugacy_certificate(&cert).unwrap().valid);
    assert!(verify_conjugacy_certificate(&cert.inverse()).unwrap().valid);
    // the orders are not isomorphic as orders with involution, so the
    // conjugator cannot normalize SL(2, Q)
    assert!(!fixes_base_group(cert.gamma()).unwrap().fixed);
}

#[test]
fn printed_root_two_diagonal_fails_the_determinant_clause() {
    let h = alg(-1, -7);
    let inv = inv_negating_ij(&h);
    let m = displayed_sqrt2_diagonal(&h);
    let report = is_member(&inv, &m).unwrap();
    assert_eq!(report.violations, vec![CLAUSE_DET.to_string()]);
    // it differs from the constructed member by right multiplication with diag(1, −1)
    let built = build_diag_conjugator(&inv, &q(&h, [1, 1, 0, 0], 1)).unwrap();
    assert_eq!(m.d, -&built.matrix().d);
    assert_eq!(m.a, built.matrix().a);
}

fn direct_probe_is_scalar<F: Field>(gamma: &VahlenMatrix<F>, probe: &Mat2<Rational>, image: &Mat2<F>) -> bool {
    // image·γ = γ·probe, checked without inverting γ
    assert_eq!(image.mul(gamma.matrix()), gamma.matrix().mul(&probe.lift()));
    image
        .entries()
        .iter()
        .all(|e| e.coords()[1..].iter().all(Zero::is_zero) && e.coords()[0].to_rational().is_some())
}

#[test]
fn base_group_probes_match_direct_conjugation() {
    let h = alg(-1, -7);
    let inv = inv_negating_ij(&h);
    let gammas = [
        build_diag_conjugator(&inv, &q(&h, [1, 1, 0, 0], 1)).unwrap(),
        build_diag_conjugator(&inv, &h.basis_element(2)).unwrap(),
        VahlenMatrix::upper(&inv, &h.basis_element(1)).unwrap().lift(),
        VahlenMatrix::identity(&inv),
    ];
    let expected = [false, true, false, true];
    for (g, want) in gammas.iter().zip(expected) {
        let r = fixes_base_group(g).unwrap();
        for p in &r.probes {
            assert_eq!(p.scalar, direct_probe_is_scalar(g, &p.probe, &p.image));
        }
        assert_eq!(r.fixed, want);
    }
}

/// For `u` with `u·u‡` central, `diag(u′, (u′⁻¹)‡)` conjugates `SL‡(2, O)` onto
/// `SL‡(2, uOu⁻¹)` and normalizes `SL(2, Q)`.
#[test]
fn central_twist_conjugators_validate_and_fix_the_base_group() {
    let cases: Vec<(qvahlen::QuaternionAlgebra, Involution, OrderLattice)> = vec![
        {
            let h = alg(-1, -7);
            (h.clone(), inv_negating_ij(&h), half_j_order(&h))
        },
        {
            let h = h23();
            (h.clone(), inv_negating_j(&h), half_j_order(&h))
        },
        {
            let h = h23();
            (h.clone(), inv_negating_j(&h), twisted_order_23(&h))
        },
    ];
    let mut validated = 0;
    for (h, inv, o) in cases {
        for k in 1..4 {
            let u = h.basis_element(k);
            let uu = &u * &inv.apply(&u).unwrap();
            assert!(uu.is_scalar());
            let target = conjugate_order(&u, &o).unwrap();
            let gamma = build_diag_conjugator(&inv, &u).unwrap();
            let cert = ConjugacyCertificate::new(gamma, o.clone(), target.clone()).unwrap();
            let report = verify_conjugacy_certificate(&cert).unwrap();
            assert!(report.valid, "u = {u}: {:?}", report.first_failure());
            assert!(fixes_base_group(cert.gamma()).unwrap().fixed, "u = {u}");
            assert_eq!(o.reduced_discriminant(), target.reduced_discriminant());
            assert_eq!(o.algebra().ramified_places(), target.algebra().ramified_places());
            validated += 1;
        }
    }
    assert_eq!(validated, 9);
}

#[test]
fn certificate_verdicts_are_symmetric() {
    let h = h23();
    let inv = inv_negating_j(&h);
    let o1 = half_j_order(&h);
    let o2 = twisted_order_23(&h);
    let identity = VahlenMatrix::identity(&inv);
    let certs = [
        sqrt3_certificate(),
        ConjugacyCertificate::new(identity.clone(), o1.clone(), o2.clone()).unwrap(),
        ConjugacyCertificate::new(identity, o1.clone(), o1.clone()).unwrap(),
        ConjugacyCertificate::new(
            VahlenMatrix::upper(&inv, &h.basis_element(1)).unwrap().lift(),
            o1.clone(),
            o1,
        )
        .unwrap(),
    ];
    let mut seen_false = false;
    for c in &certs {
        let a = verify_conjugacy_certificate(c).unwrap().valid;
        let b = verify_conjugacy_certificate(&c.inverse()).unwrap().valid;
        assert_eq!(a, b);
        seen_false |= !a;
    }
    assert!(seen_false);
}

#[test]
fn local_comparison_of_the_twisted_pair() {
    let h = h23();
    let inv = inv_negating_j(&h);
    let r = local_invariant_report(&half_j_order(&h), &twisted_order_23(&h), &inv).unwrap();
    assert_eq!(r.elementary_divisors, vec![frac(1, 3), rat(1), rat(1), rat(3)]);
    assert_eq!(r.differing_primes(), vec![3]);
    let h7 = alg(-1, -7);
    let inv7 = inv_negating_ij(&h7);
    let r = local_invariant_report(&half_j_order(&h7), &swapped_order_7(&h7), &inv7).unwrap();
    assert_eq!(r.differing_primes(), vec![2]);
}

fn split(h: &qvahlen::QuaternionAlgebra, m: [[i64; 2]; 2], den: i64) -> Quaternion<Rational> {
    split_matrix(h, m.map(|r| r.map(|x| frac(x, den))))
}

/// `u⁻¹·v·E·v‡·u` for `E = E₁₁, E₂₂`, in closed form over `v = (v₁, v₂; v₃, v₄)`
/// with `λ = 2`.
fn closed_form_entries(v: [Rational; 4]) -> Vec<Rational> {
    let l = rat(2);
    let l1 = rat(3);
    let [v1, v2, v3, v4] = v;
    let a = &v1 + &v3;
    let b = &l * &v1 - &v3;
    let c = &v2 + &v4;
    let d = &l * &v2 - &v4;
    vec![
        &a * &a / &l1,
        -(&b * &a) / (&l * &l1),
        -(&b * &a) / &l1,
        &b * &b / (&l * &l1),
        &l * &c * &c / &l1,
        -(&d * &c) / &l1,
        -(&l * &d * &c) / &l1,
        &d * &d / &l1,
    ]
}

fn three_integral(x: &Rational) -> bool {
    x.is_zero() || qvahlen::arith::rational_valuation(x, 3) >= 0
}

#[test]
fn split_local_example_forces_integral_conjugators() {
    let h = alg(1, 1);
    let inv = split_involution(&h, 2);
    let o1 = split_integral_order(&h);
    let u = split(&h, [[1, -1], [2, 1]], 1);
    let o2 = conjugate_order(&u, &o1).unwrap();
    let e11 = split(&h, [[1, 0], [0, 0]], 1);
    let image = &(&u * &e11) * &u.inverse().unwrap();
    assert_eq!(split_entries(&image), [[frac(1, 3), frac(1, 3)], [frac(2, 3), frac(2, 3)]]);
    assert!(!o1.contains(&image));

    let mut failures = 0;
    for n in 1..81 {
        let c = [n % 3, (n / 3) % 3, (n / 9) % 3, (n / 27) % 3];
        let v = split(&h, [[c[0], c[1]], [c[2], c[3]]], 3);
        let holds = plus_part_conjugation_constraint_at(&v, &o1, &o2, &inv, 3).unwrap();
        let entries = split_entries(&v);
        let oracle = closed_form_entries([
            entries[0][0].clone(),
            entries[0][1].clone(),
            entries[1][0].clone(),
            entries[1][1].clone(),
        ])
        .iter()
        .all(three_integral);
        assert_eq!(holds, oracle, "v = {c:?}/3");
        assert!(!holds, "v = {c:?}/3");
        failures += 1;
    }
    assert_eq!(failures, 80);

    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let v1 = rng.gen_range(-20..=20);
        let v2 = rng.gen_range(-20..=20);
        let v3 = -v1 + 3 * rng.gen_range(-5..=5);
        let v4 = -v2 + 3 * rng.gen_range(-5..=5);
        let v = split(&h, [[v1, v2], [v3, v4]], 1);
        assert!(o1.contains(&v));
        assert!(plus_part_conjugation_constraint_at(&v, &o1, &o2, &inv, 3).unwrap());
        assert!(closed_form_entries([rat(v1), rat(v2), rat(v3), rat(v4)]).iter().all(three_integral));
    }
}
