//! The searches that produced the frozen witnesses still find them first.

use std::sync::Arc;

use gerbecoh::arith::search_sha_witness;
use gerbecoh::fixtures;
use gerbecoh::gerbe::{brauer_manin, search_mh_witness};
use gerbecoh::group::named;
use gerbecoh::zmodule::QmodZ;

#[test]
fn first_mh_witness_is_the_frozen_one() {
    let w = search_mh_witness(3).unwrap().expect("a witness exists");
    assert_eq!(w.group, "Z4xZ2");
    assert_eq!(w.modulus, 2);
    assert_eq!(w.class, vec![1, 1, 0]);
    assert_eq!(w.places, vec![vec![0, 1, 4, 5]]);
    let model = fixtures::witness_model();
    assert_eq!(w.inv, vec![model.places()[0].inv().to_vec()]);
    assert_eq!(w.functional, brauer_manin(&fixtures::witness_abelian(), &model).unwrap());
    assert_eq!(w.functional.values, vec![QmodZ::new(1, 2)]);

    let rebuilt = w.extension(Arc::new(named::cyclic(2)), &[0, 1]).unwrap();
    assert!(rebuilt.gamma().same_table(fixtures::witness_abelian().gamma()));
}

#[test]
fn first_sha_witness_is_the_frozen_one() {
    let w = search_sha_witness(16).unwrap().expect("a witness exists");
    assert_eq!(*w.module, *fixtures::sha_witness_module());
    let frozen = fixtures::frozen_sha().unwrap();
    assert_eq!(w.sha.structure().factors(), frozen.structure.as_slice());
    assert_eq!(w.sha.generators(), frozen.generators.as_slice());
}

#[test]
fn nonabelian_witness_agrees_with_its_abelian_shadow() {
    let model = fixtures::witness_model();
    let big = brauer_manin(&fixtures::witness(), &model).unwrap();
    assert!(!big.is_zero());
    let small = brauer_manin(&fixtures::witness_abelian(), &model).unwrap();
    assert!(!small.is_zero());
}
