use shadowlat::arith::{q, qr};
use shadowlat::etafunc::{
    build_basis, critical_dimension, dim_c, verify_identity, EtaError, EtaQuotient, Identity, SUPPORTED_N,
};
use shadowlat::qseries::GRID;

const ORDER: i64 = 48 * GRID;

#[test]
fn odd_level_identities_hold_through_q48() {
    for n in [1, 3, 5, 7, 11, 15, 23] {
        let ids = Identity::for_level(n);
        assert_eq!(ids.len(), 8);
        for id in ids {
            let r = verify_identity(id, n, ORDER).unwrap();
            assert!(r.holds, "{} at N={n}: {:?}", r.identity, r.discrepancy);
        }
    }
}

#[test]
fn level_two_identities_hold_through_q48() {
    let ids = Identity::for_level(2);
    assert_eq!(ids.len(), 6);
    for id in ids {
        let r = verify_identity(id, 2, ORDER).unwrap();
        assert!(r.holds, "{}: {:?}", r.identity, r.discrepancy);
    }
}

#[test]
fn theta_eta_identity() {
    let r = verify_identity(Identity::Z4Eta, 1, ORDER).unwrap();
    assert!(r.holds, "{:?}", r.discrepancy);
}

#[test]
fn identities_reject_wrong_levels() {
    assert!(matches!(verify_identity(Identity::ED9, 3, ORDER), Err(EtaError::UnsupportedCombination(..))));
    assert!(matches!(verify_identity(Identity::ED1, 2, ORDER), Err(EtaError::UnsupportedCombination(..))));
    assert!(matches!(build_basis(4, ORDER), Err(EtaError::UnsupportedN(4))));
}

#[test]
fn critical_dimensions_and_basis_shape() {
    let expect = [(1, 24), (2, 16), (3, 12), (5, 8), (6, 8), (7, 6), (11, 4), (14, 4), (15, 4), (23, 2)];
    for (n, dn) in expect {
        assert_eq!(critical_dimension(n).unwrap(), dn);
    }
    for n in SUPPORTED_N {
        let b = build_basis(n, 12 * GRID).unwrap();
        assert_eq!(b.critical_dim, critical_dimension(n).unwrap());
        assert_eq!(b.s as u64 * dim_c(n), b.critical_dim);
        // g1 starts 1 + …, g2 vanishes at infinity, s2 has a pole
        assert_eq!(b.g1.coeff(0), q(1));
        assert!(b.g2.terms().next().unwrap().0 > 0);
        assert!(b.s2.terms().next().unwrap().0 < 0);
    }
    let b = build_basis(1, 8 * GRID).unwrap();
    assert_eq!(b.s2.terms().next().unwrap(), (-2 * GRID, &qr(-1, 4096)));
}

#[test]
fn eta_quotient_expansion() {
    // η(z)^24 = q² − 24q⁴ + 252q⁶ − … in the q = e^{πiz} convention
    let d = EtaQuotient::eta(q(1), 24).expand(8 * GRID).unwrap();
    assert_eq!(d.coeff_q(2), q(1));
    assert_eq!(d.coeff_q(4), q(-24));
    assert_eq!(d.coeff_q(6), q(252));
    let half = EtaQuotient::eta(qr(1, 2), 2).expand(4 * GRID).unwrap();
    assert!(half.terms().all(|(e, _)| e % (GRID / 12) == 0));
}
