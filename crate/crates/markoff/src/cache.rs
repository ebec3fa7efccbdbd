//! Process-wide memo table keyed by slope, holding the Markoff number m and,
//! once computed, the character pair (u, v).
//!
//! The table is bounded: past the cap it is dropped wholesale and refilled on
//! demand. Writes are idempotent (a slope always maps to the same values), so
//! concurrent readers and writers need no coordination beyond the mutex.

use num_bigint::BigUint;
use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use crate::farey::Slope;

const CACHE_CAP: usize = 1 << 16;

#[derive(Clone, Default)]
struct Entry {
    m: Option<BigUint>,
    uv: Option<(BigUint, BigUint)>,
}

static TABLE: LazyLock<Mutex<HashMap<Slope, Entry>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

fn with_entry(t: &Slope, f: impl FnOnce(&mut Entry)) {
    let mut table = TABLE.lock().expect("cache mutex");
    if table.len() >= CACHE_CAP && !table.contains_key(t) {
        table.clear();
    }
    f(table.entry(t.clone()).or_default());
}

pub fn get_m(t: &Slope) -> Option<BigUint> {
    TABLE
        .lock()
        .expect("cache mutex")
        .get(t)
        .and_then(|e| e.m.clone())
}

pub fn put_m(t: &Slope, m: BigUint) {
    with_entry(t, |e| e.m = Some(m));
}

pub fn get_uv(t: &Slope) -> Option<(BigUint, BigUint)> {
    TABLE
        .lock()
        .expect("cache mutex")
        .get(t)
        .and_then(|e| e.uv.clone())
}

pub fn put_uv(t: &Slope, u: BigUint, v: BigUint) {
    with_entry(t, |e| e.uv = Some((u, v)));
}

/// Complete (slope, m, u, v) records currently held, sorted by slope.
pub fn export_records() -> Vec<(Slope, BigUint, BigUint, BigUint)> {
    let table = TABLE.lock().expect("cache mutex");
    let mut out: Vec<_> = table
        .iter()
        .filter_map(|(t, e)| {
            let m = e.m.clone()?;
            let (u, v) = e.uv.clone()?;
            Some((t.clone(), m, u, v))
        })
        .collect();
    drop(table);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Seed the table from previously exported records.
pub fn import_records(records: impl IntoIterator<Item = (Slope, BigUint, BigUint, BigUint)>) {
    for (t, m, u, v) in records {
        with_entry(&t, |e| {
            e.m = Some(m);
            e.uv = Some((u, v));
        });
    }
}

/// Drop everything; mainly for tests.
pub fn clear() {
    TABLE.lock().expect("cache mutex").clear();
}
