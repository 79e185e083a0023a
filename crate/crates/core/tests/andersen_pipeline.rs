use andersen_core::andersen::{block_from_weight, cross_check, AndersenBlock, BlockDescriptor};
use andersen_core::coxeter::{CoxeterSystem, GeneratorSet, Weight};
use andersen_core::filtration::gysin_model;
use num_bigint::BigInt;

fn all_subsets(rank: usize) -> impl Iterator<Item = GeneratorSet> {
    (0u64..1 << rank).map(move |bits| GeneratorSet::from_indices((0..rank).filter(move |i| bits >> i & 1 == 1)))
}

#[test]
fn every_report_satisfies_the_identity() {
    for label in ["A2", "B2", "A3"] {
        let sys = CoxeterSystem::from_label(label).unwrap();
        for subset in all_subsets(sys.rank()) {
            let block = AndersenBlock::new(BlockDescriptor::new(sys.clone(), subset).unwrap()).unwrap();
            let table = block.full_table();
            assert!(!table.is_empty());
            for r in &table {
                assert!(r.satisfies_identity(), "{label} {subset} {} {}", r.ybar, r.xbar);
                assert!(cross_check(r).unwrap(), "{label} {subset} {} {}", r.ybar, r.xbar);
                assert_eq!(r.layers.get(&(r.ldiff as usize)), Some(&1));
                assert!(r.layers.keys().all(|&i| (r.ldiff - i as i32) % 2 == 0));
                assert!(gysin_model(&r.h, r.ldiff as u32).unwrap().is_selfdual());
            }
            let n = block.cosets().len();
            assert!(table.len() >= n && table.len() <= n * n);
        }
    }
}

#[test]
fn incomparable_pairs_report_nothing() {
    let sys = CoxeterSystem::from_label("A3").unwrap();
    let block = AndersenBlock::new(BlockDescriptor::new(sys, GeneratorSet::from_indices([1])).unwrap()).unwrap();
    let t = block.kl().group().clone();
    for xbar in block.cosets().cosets() {
        for ybar in block.cosets().cosets() {
            let r = block.layers(ybar, xbar).unwrap();
            if !t.bruhat_leq(ybar.longest_index(), xbar.longest_index()) {
                assert!(r.layers.is_empty());
                assert_eq!(r.total, BigInt::from(0));
            }
        }
    }
}

#[test]
fn tables_depend_only_on_the_block() {
    let b2 = CoxeterSystem::from_label("B2").unwrap();
    // singular for the short simple coroot only
    let a = Weight::from_integers(&[0, -1]);
    let b = Weight::from_integers(&[2, -1]);
    let ta = AndersenBlock::new(block_from_weight(&b2, &a).unwrap()).unwrap().full_table();
    let tb = AndersenBlock::new(block_from_weight(&b2, &b).unwrap()).unwrap().full_table();
    assert_eq!(ta, tb);
    assert!(!ta.is_empty());

    let a2 = CoxeterSystem::from_label("A2").unwrap();
    let half = "-1/2,-1/2".parse::<Weight>().unwrap();
    let shifted = "1/2,-1/2".parse::<Weight>().unwrap();
    let ba = block_from_weight(&a2, &half).unwrap();
    let bb = block_from_weight(&a2, &shifted).unwrap();
    assert_eq!(ba.ambient.descriptor(), bb.ambient.descriptor());
    let ta = AndersenBlock::new(ba).unwrap().full_table();
    let tb = AndersenBlock::new(bb).unwrap().full_table();
    assert_eq!(ta, tb);
}
