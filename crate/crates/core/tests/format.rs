//! Codec round-trips over the whole bundled corpus.

use nonorbracket_core::*;

const CORPUS: &[(&str, &str)] = &[
    ("d1.gauss", include_str!("../../../data/d1.gauss")),
    ("d2.gauss", include_str!("../../../data/d2.gauss")),
    ("d3.gauss", include_str!("../../../data/d3.gauss")),
    ("d4.gauss", include_str!("../../../data/d4.gauss")),
    ("d1_star.gauss", include_str!("../../../data/d1_star.gauss")),
    ("d2_star.gauss", include_str!("../../../data/d2_star.gauss")),
    ("trefoil.gauss", include_str!("../../../data/trefoil.gauss")),
    ("hopf.gauss", include_str!("../../../data/hopf.gauss")),
    ("kink.gauss", include_str!("../../../data/kink.gauss")),
    ("unknot.gauss", include_str!("../../../data/unknot.gauss")),
    (
        "meridian.gauss",
        include_str!("../../../data/meridian.gauss"),
    ),
    (
        "moebius_core.gauss",
        include_str!("../../../data/moebius_core.gauss"),
    ),
];

#[test]
fn corpus_validates_and_round_trips() {
    for (name, text) in CORPUS {
        let diagrams = parse_diagram_file(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        for d in diagrams {
            assert!(d.validate().is_valid(), "{name}: {}", d.validate());
            let emitted = serialize_diagram(&d);
            let back = parse_single_diagram(&emitted).unwrap();
            assert_eq!(back, d, "{name}: text round trip");
            assert_eq!(
                serialize_diagram(&back),
                emitted,
                "{name}: serializer is stable"
            );
            let back_json = diagram_from_json(&diagram_to_json(&d)).unwrap();
            assert_eq!(back_json, d, "{name}: json round trip");
        }
    }
}

#[test]
fn move_generated_diagrams_round_trip() {
    let seeds = [
        parse_single_diagram(include_str!("../../../data/d2.gauss")).unwrap(),
        parse_single_diagram(include_str!("../../../data/d3.gauss")).unwrap(),
    ];
    for (i, seed) in seeds.iter().enumerate() {
        for k in 0..25u64 {
            let traj = random_move_sequence(seed, 4, 500 + 25 * i as u64 + k, 10);
            for (_, d) in traj {
                let back = parse_single_diagram(&serialize_diagram(&d)).unwrap();
                assert_eq!(back, d);
            }
        }
    }
}

#[test]
fn annulus_and_moebius_surfaces() {
    // a kink on the annulus: the normalized bracket of an unknot is 1
    let a = parse_single_diagram(
        "surface annulus-v\nlink kink\ncrossings 1\nhandedness 1\ncode 1 -1\nend\n",
    )
    .unwrap();
    assert!(a.surface.is_orientable());
    assert_eq!(classical_bracket(&a).unwrap(), LaurentU::one());
    // J agrees on the orientable surface
    let la = propagate_labels(&a, Labeling::A).unwrap();
    assert_eq!(j_polynomial(&a, &la).unwrap(), JPoly::new(0, LaurentU::one()));

    // twisted vertical pair: ports pair l_i <-> r_i, and an odd loop is not
    // pseudo-classical
    let m = parse_single_diagram(
        "surface moebius-v\nlink core\ncrossings 0\ncode l1 r1\nend\n",
    )
    .unwrap();
    assert!(!m.surface.is_orientable());
    assert!(!is_pseudo_classical(&m, 0));
    assert!(matches!(
        classical_bracket(&m),
        Err(DomainError::NonOrientableSurface)
    ));

    // an even loop through the Moebius gluing is pseudo-classical and its
    // wall passes cancel homologically per circle
    let m2 = parse_single_diagram(
        "surface moebius-v\nlink even\ncrossings 0\ncode l1 r1 l2 r2\nend\n",
    )
    .unwrap();
    assert!(is_pseudo_classical(&m2, 0));
    let la = propagate_labels(&m2, Labeling::A).unwrap();
    assert_eq!(j_polynomial(&m2, &la).unwrap(), JPoly::new(0, LaurentU::one()));
}

#[test]
fn port_partner_is_an_involution_on_corpus_walls() {
    for (name, text) in CORPUS {
        for d in parse_diagram_file(text).unwrap() {
            for ev in d.components.iter().flatten() {
                if let Some(partner) = d.port_partner(ev) {
                    assert_eq!(
                        d.port_partner(&partner),
                        Some(*ev),
                        "{name}: involution at {}",
                        ev.token()
                    );
                }
            }
        }
    }
}
