use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::algebra::ChevalleyAlgebra;
use super::rep::{RepKind, Representation};
use super::roots::CartanType;
use crate::error::Result;

type AlgMap = HashMap<(CartanType, usize), Arc<ChevalleyAlgebra>>;
type RepMap = HashMap<(CartanType, usize, RepKind), Arc<Representation>>;

fn algebras() -> &'static Mutex<AlgMap> {
    static CELL: OnceLock<Mutex<AlgMap>> = OnceLock::new();
    CELL.get_or_init(Default::default)
}

fn reps() -> &'static Mutex<RepMap> {
    static CELL: OnceLock<Mutex<RepMap>> = OnceLock::new();
    CELL.get_or_init(Default::default)
}

/// Shared, lazily built algebra for `(type, rank)`.
pub fn algebra(t: CartanType, rank: usize) -> Result<Arc<ChevalleyAlgebra>> {
    if let Some(a) = algebras().lock().unwrap().get(&(t, rank)) {
        return Ok(a.clone());
    }
    // build outside the lock; a concurrent duplicate build is harmless
    let a = Arc::new(ChevalleyAlgebra::new(t, rank)?);
    Ok(algebras().lock().unwrap().entry((t, rank)).or_insert(a).clone())
}

/// Shared representation of a cached algebra.
pub fn representation(t: CartanType, rank: usize, kind: RepKind) -> Result<Arc<Representation>> {
    if let Some(r) = reps().lock().unwrap().get(&(t, rank, kind)) {
        return Ok(r.clone());
    }
    let alg = algebra(t, rank)?;
    let r = Arc::new(Representation::new(&alg, kind)?);
    Ok(reps().lock().unwrap().entry((t, rank, kind)).or_insert(r).clone())
}
