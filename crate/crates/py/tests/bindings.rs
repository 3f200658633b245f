use ssimp::*;

#[test]
fn cyclic_run_through_bindings() {
    let run: serde_json::Value = serde_json::from_str(
        &semisimplify("cyclic:5", 5, vec!["jordan:2".into()], 1, 0, 64, 144, 6, 1).unwrap(),
    )
    .unwrap();
    assert_eq!(run["basis"].as_array().unwrap().len(), 4);
}

#[test]
fn rings_and_arithmetic() {
    let z4 = ring_catalog("group_ring:Z4").unwrap();
    assert!(ring_validate(&z4).unwrap());
    assert_eq!(ring_iso(&z4, &z4).unwrap().map(|s| s.len()), Some(4));
    assert_eq!(lucas_binom(10, 2, 2).unwrap(), 1);
    assert_eq!(gl2_fusion((1, 0), (1, 0)).unwrap(), vec![(2, 0), (1, 1)]);
    let (_, red) = theta(5, 0, 11).unwrap();
    assert!(red.contains("W_2") && red.contains("W_1"));
    assert!(ring_catalog("E8").is_err());
}
