use ribvol::enumerate::{enumerate_graphs, hurwitz_count, hurwitz_reconstruction, hurwitz_table, volume_oracle};
use ribvol::poly::Poly;
use ribvol::rational::{q, qr, Q};
use ribvol::volumes::{coefficient, f_polynomial, z_evaluate};

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

#[test]
fn catalog_sizes_and_masses() {
    for (t, count, mass) in [
        ((0, 2, 1), 1, qr(1, 1)),
        ((1, 1, 1), 1, qr(1, 4)),
        ((2, 1, 1), 4, qr(21, 8)),
        ((1, 3, 1), 54, qr(105, 2)),
        ((1, 2, 2), 86, qr(167, 2)),
        ((0, 3, 3), 738, qr(738, 1)),
    ] {
        let cat = enumerate_graphs(t.0, t.1, t.2).unwrap();
        assert_eq!((cat.entries.len(), cat.mass()), (count, mass), "{t:?}");
    }
}

#[test]
fn genus_one_two_boundaries_matches_hurwitz_reconstruction() {
    let f = f_polynomial(1, 2).unwrap();
    let mut want = Poly::zero(2);
    for (e, c) in [([4, 0], qr(1, 24)), ([3, 1], qr(1, 12)), ([2, 2], qr(1, 12)), ([1, 3], qr(1, 12)), ([0, 4], qr(1, 24))] {
        want.add_term(e.to_vec(), c);
    }
    assert_eq!(f, want);
    let table = hurwitz_table(&enumerate_graphs(1, 2, 1).unwrap());
    assert_eq!(hurwitz_reconstruction(&table, 2), f);
}

#[test]
fn genus_two_one_boundary() {
    let f = f_polynomial(2, 1).unwrap();
    assert_eq!(f, Poly::monomial(vec![7], qr(1, 1920)));
    assert_eq!(coefficient(&[7]), qr(1, 1920));
    assert_eq!(hurwitz_count(2, &[8]).unwrap(), qr(21, 8));
    assert_eq!(hurwitz_count(1, &[4]).unwrap(), qr(1, 4));
}

#[test]
fn values_against_oracle() {
    for ((g, np, nm), lp, lm, want) in [
        ((1, 2, 1), vec![3, 4], vec![7], qr(1225, 24)),
        ((2, 1, 1), vec![2], vec![2], qr(1, 15)),
        ((1, 2, 2), vec![3, 5], vec![4, 4], qr(860, 3)),
        ((0, 3, 3), vec![1, 2, 3], vec![2, 2, 2], qr(72, 1)),
    ] {
        assert_eq!(z_evaluate(g, &qs(&lp), &qs(&lm)).unwrap(), want, "Z_({g},{np},{nm})");
        let cat = enumerate_graphs(g, np, nm).unwrap();
        assert_eq!(volume_oracle(&cat, &lp, &lm).unwrap(), want, "oracle ({g},{np},{nm})");
    }
}

#[test]
fn signed_type_two_reading_is_rejected_by_oracle() {
    use ribvol::volumes::{TypeTwoFactor, ZEngine};
    let signed = ZEngine::new(TypeTwoFactor::Signed);
    let cat = enumerate_graphs(0, 2, 2).unwrap();
    let mut disagreements = 0;
    for (lp, lm) in [(vec![1, 3], vec![2, 2]), (vec![1, 5], vec![3, 3]), (vec![2, 2], vec![1, 3])] {
        let oracle = volume_oracle(&cat, &lp, &lm).unwrap();
        assert_eq!(z_evaluate(0, &qs(&lp), &qs(&lm)).unwrap(), oracle);
        let s = signed.evaluate(0, &qs(&lp), &qs(&lm)).unwrap();
        disagreements += (s != oracle) as usize;
    }
    assert!(disagreements > 0);
}
