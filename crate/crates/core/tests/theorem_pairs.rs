use std::time::Instant;

use zsfusion::fusring::validate_fusion_ring;
use zsfusion::suite;
use zsfusion::theorem::theorem1;
use zsfusion::Options;

#[test]
fn every_named_pair_passes() {
    let pairs = [
        ("S3 = Z2·Z3", suite::s3_pair()),
        ("A4 = Z3·V4", suite::a4_pair()),
        ("S4 = Z4·S3", suite::s4_pair()),
        ("G trivial", suite::trivial_g_pair()),
        ("Z2 x Z3", suite::direct_product_pair()),
    ];
    for (name, mp) in pairs {
        let start = Instant::now();
        let out = theorem1(&mp, &Options::default()).unwrap();
        assert!(out.passed(), "{name}: {}", out.report);
        assert!(validate_fusion_ring(&out.extension_ring.ring).is_ok());
        assert!(validate_fusion_ring(&out.dual_ring.ring).is_ok());
        eprintln!("{name}: rank {} in {:?}", out.extension_ring.ring.rank(), start.elapsed());
    }
}

#[test]
fn every_bundled_factorization_passes() {
    for (name, mp) in suite::bundled_matched_pairs() {
        let start = Instant::now();
        let out = theorem1(&mp, &Options::default()).unwrap();
        assert!(out.passed(), "{name}: {}", out.report);
        eprintln!(
            "{name}: |G| = {}, |Γ| = {}, rank {} in {:?}",
            mp.g().order(),
            mp.gamma().order(),
            out.extension_ring.ring.rank(),
            start.elapsed()
        );
    }
}
