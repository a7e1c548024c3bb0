use serde_json::Value;
use surface_cyclic_web::{dataset_summary_impl, fatgraph_summary_impl, polygon_svg_impl};

#[test]
fn fourteen_gon_svg() {
    let svg = polygon_svg_impl(r#"{"n":14,"g0":0,"pairs":[[1,2],[1,7],[5,14]]}"#).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches(r#"class="side""#).count(), 14);
}

#[test]
fn polygon_rejects_reducible_actions() {
    let err = polygon_svg_impl(r#"{"n":42,"g0":1,"pairs":[[5,6],[1,6]]}"#).unwrap_err();
    assert!(!err.is_empty());
    assert!(polygon_svg_impl(r#"{"n":6,"g0":0,"pairs":[[1,2],[1,3]]}"#)
        .unwrap_err()
        .contains("not a data set"));
    assert!(polygon_svg_impl("[").is_err());
}

#[test]
fn summary_of_target_action() {
    let v: Value =
        serde_json::from_str(&dataset_summary_impl(r#"{"n":42,"g0":1,"pairs":[[5,6],[1,6]]}"#).unwrap()).unwrap();
    assert_eq!(v["genus"], 36);
    assert_eq!(v["fix_dimension"], 4);
    assert_eq!(v["descriptor"]["dim"], 4);
    assert_eq!(v["genus_trace"].as_array().unwrap().last().unwrap(), 36);
}

#[test]
fn torus_word() {
    let v: Value = serde_json::from_str(&fatgraph_summary_impl("a b a^-1 b^-1").unwrap()).unwrap();
    assert_eq!(v["genus"], 1);
    assert_eq!(v["largest_order"], 4);
    assert_eq!(v["irreducible"], true);
    assert!(fatgraph_summary_impl("a b").is_err());
}
