use std::path::Path;

use pretzel_core::diagram::build_diagram;
use pretzel_core::TwistVector;

fn check(vector: &str, file: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(file);
    let expected = std::fs::read_to_string(&path).unwrap();
    let v: TwistVector = vector.parse().unwrap();
    assert_eq!(build_diagram(&v).to_pd(), expected, "{vector} vs {}", path.display());
}

#[test]
fn trefoil() {
    check("1,1,1", "p_1_1_1.pd");
}

#[test]
fn even_type_8_5() {
    check("2,3,3", "p_2_3_3.pd");
}

#[test]
fn minus_one_band() {
    check("-1,3,3", "p_m1_3_3.pd");
}

#[test]
fn zero_band_connected_sum() {
    check("0,3,5", "p_0_3_5.pd");
}

#[test]
fn two_component_link() {
    check("3,3", "p_3_3.pd");
}
