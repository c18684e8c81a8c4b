//! Neither invariant subsumes the other: one pair of Klein-bottle knots is
//! separated only by the double cover's bracket, the other only by J.

use nonorbracket_core::*;

fn parse(text: &str) -> Diagram {
    parse_single_diagram(text).unwrap()
}

fn j_canonical(d: &Diagram) -> JPoly {
    let la = propagate_labels(d, Labeling::A).unwrap();
    j_polynomial(d, &la).unwrap().canonical_pair()
}

fn cover_bracket(d: &Diagram) -> LaurentU {
    classical_bracket(&double_cover(d).unwrap())
        .unwrap()
        .canonical_u_inverse()
}

#[test]
fn cover_bracket_separates_d1_d2_but_j_does_not() {
    let d1 = parse(include_str!("../../../data/d1.gauss"));
    let d2 = parse(include_str!("../../../data/d2.gauss"));
    assert_eq!(j_canonical(&d1), j_canonical(&d2));
    assert_ne!(cover_bracket(&d1), cover_bracket(&d2));
}

#[test]
fn j_separates_d3_d4_but_cover_bracket_does_not() {
    let d3 = parse(include_str!("../../../data/d3.gauss"));
    let d4 = parse(include_str!("../../../data/d4.gauss"));
    assert_ne!(j_canonical(&d3), j_canonical(&d4));
    assert_eq!(cover_bracket(&d3), cover_bracket(&d4));
}
