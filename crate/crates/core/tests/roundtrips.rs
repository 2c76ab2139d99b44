mod common;

use common::roundtrip;

const CASES: u32 = 1000;

#[test]
fn interleave() {
    roundtrip::interleave_roundtrip(CASES).unwrap();
}

#[test]
fn puncture() {
    roundtrip::puncture_roundtrip(CASES).unwrap();
}

#[test]
fn asm() {
    roundtrip::asm_roundtrip(CASES).unwrap();
}

#[test]
fn alist() {
    roundtrip::alist_roundtrip(CASES).unwrap();
}

#[test]
fn rates() {
    roundtrip::rate_roundtrip(CASES).unwrap();
}
