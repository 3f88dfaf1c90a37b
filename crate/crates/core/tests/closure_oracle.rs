//! The evaluator's indistinguishability classes agree with a brute-force
//! union-find closure over every sequence.

mod common;

use common::*;
use supergossip::*;

fn check(n: usize, variant: Variant, protocol: OracleProtocol, max_len: usize) {
    let oracle = ClosureOracle::build(n, variant, protocol, max_len);
    check_against_library(&oracle).unwrap_or_else(|e| panic!("{variant:?} {protocol:?} n={n}: {e}"));
}

#[test]
fn three_agents_every_variant() {
    for (variant, protocol) in [
        (Variant::Plain, OracleProtocol::Any),
        (Variant::Known, OracleProtocol::Cmo),
        (Variant::Known, OracleProtocol::Lns),
        (Variant::Known, OracleProtocol::Pig),
        (Variant::Engaged, OracleProtocol::Any),
        (Variant::Engaged, OracleProtocol::Cmo),
        (Variant::Engaged, OracleProtocol::Pig),
        (Variant::Skip, OracleProtocol::Cmo),
        (Variant::Skip, OracleProtocol::Any),
        (Variant::Skip, OracleProtocol::Lns),
    ] {
        check(3, variant, protocol, 5);
    }
}

#[test]
fn four_agents_known_lns() {
    check(4, Variant::Known, OracleProtocol::Lns, 5);
}

#[test]
fn class_sizes_by_hand() {
    // After ab;cd;ac;bd;ab agent b sees only its own calls plus two foreign
    // calls whose direction it cannot tell: four sequences.
    let oracle = ClosureOracle::build(4, Variant::Plain, OracleProtocol::Any, 5);
    let target = seq("ab;cd;ac;bd;ab", 4);
    let level = 5;
    let idx = (0..oracle.level_size(level)).find(|&j| oracle.sequence(level, j) == target).unwrap();
    let b = agent('b').index();
    let class = oracle.class(level, b, idx);
    let members: Vec<String> = (0..oracle.level_size(level))
        .filter(|&j| oracle.class(level, b, j) == class)
        .map(|j| oracle.sequence(level, j).to_string())
        .collect();
    assert_eq!(members, ["ab;cd;ac;bd;ab", "ab;cd;ca;bd;ab", "ab;dc;ac;bd;ab", "ab;dc;ca;bd;ab"]);
    assert!(oracle.is_super_expert(level, b, idx));
}

#[test]
fn oracle_root_is_one_class() {
    let oracle = ClosureOracle::build(3, Variant::Skip, OracleProtocol::Cmo, 1);
    assert_eq!(oracle.levels(), 2);
    assert_eq!(oracle.level_size(0), 1);
    // Six calls, and no skip yet: nobody is a super expert at the start.
    assert_eq!(oracle.level_size(1), 6);
    for a in 0..3 {
        assert!(!oracle.is_super_expert(0, a, 0));
    }
}
