//! On-disk atlas cache under `FLAGTROP_CACHE_DIR`.
//!
//! A cache file stores each cell's permutations and symbolic coordinates with
//! a SHA-256 digest of that payload. Files that fail to parse, carry a wrong
//! digest or fail the cell consistency checks are rebuilt.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use flagtrop::mrcells::cell_from_symbolic;
use flagtrop::{Cell, CellAtlas, Coords, Permutation, Poly};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const CACHE_ENV: &str = "FLAGTROP_CACHE_DIR";
const FORMAT_VERSION: u64 = 1;

pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("atlas-n{n}.json"))
}

/// The atlas for `n`, from the cache directory when one is configured.
pub fn load_atlas(n: usize) -> Result<Arc<CellAtlas>, CliError> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => load_or_build(Path::new(&dir), n).map(Arc::new),
        _ => Ok(CellAtlas::for_n(n)?),
    }
}

pub fn load_or_build(dir: &Path, n: usize) -> Result<CellAtlas, CliError> {
    let path = cache_path(dir, n);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Some(atlas) = decode(&text, n) {
            return Ok(atlas);
        }
    }
    let atlas = CellAtlas::build(n)?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, encode(&atlas)).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;
    Ok(atlas)
}

fn digest(payload: &Value) -> String {
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

fn poly_json(p: &Poly) -> Value {
    Value::from(
        p.terms()
            .map(|(exps, coeff)| json!([coeff.to_string(), exps]))
            .collect::<Vec<_>>(),
    )
}

fn poly_from_json(value: &Value, nvars: usize) -> Option<Poly> {
    let terms = value
        .as_array()?
        .iter()
        .map(|t| {
            let coeff: BigInt = t.get(0)?.as_str()?.parse().ok()?;
            let exps: Vec<u32> = t
                .get(1)?
                .as_array()?
                .iter()
                .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()))
                .collect::<Option<_>>()?;
            (exps.len() == nvars).then_some((exps, coeff))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Poly::from_terms(nvars, terms))
}

pub fn encode(atlas: &CellAtlas) -> String {
    let cells: Vec<Value> = atlas
        .cells()
        .iter()
        .map(|cell| {
            json!({
                "v": cell.v().images(),
                "w": cell.w().images(),
                "coords": cell.symbolic().values().iter().map(poly_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let payload = Value::from(cells);
    json!({
        "formatVersion": FORMAT_VERSION,
        "n": atlas.n(),
        "sha256": digest(&payload),
        "cells": payload,
    })
    .to_string()
}

fn permutation(value: &Value) -> Option<Permutation> {
    let images = value
        .as_array()?
        .iter()
        .map(|x| x.as_u64().and_then(|x| u8::try_from(x).ok()))
        .collect::<Option<Vec<u8>>>()?;
    Permutation::new(images).ok()
}

fn decode_cell(value: &Value, n: usize) -> Option<Cell> {
    let v = permutation(value.get("v")?)?;
    let w = permutation(value.get("w")?)?;
    let r = w.length().checked_sub(v.length())?;
    let coords = value
        .get("coords")?
        .as_array()?
        .iter()
        .map(|p| poly_from_json(p, r))
        .collect::<Option<Vec<_>>>()?;
    let symbolic = Coords::try_from_values(n, coords).ok()?;
    cell_from_symbolic(n, &v, &w, symbolic).ok()
}

/// Parses and validates a cache file; `None` means it must be rebuilt.
pub fn decode(text: &str, n: usize) -> Option<CellAtlas> {
    let value: Value = serde_json::from_str(text).ok()?;
    if value.get("formatVersion")?.as_u64()? != FORMAT_VERSION
        || value.get("n")?.as_u64()? != n as u64
    {
        return None;
    }
    let payload = value.get("cells")?;
    if value.get("sha256")?.as_str()? != digest(payload) {
        return None;
    }
    let cells = payload
        .as_array()?
        .iter()
        .map(|c| decode_cell(c, n))
        .collect::<Option<Vec<_>>>()?;
    let atlas = CellAtlas::from_cells(n, cells).ok()?;
    let perms = Permutation::all(n);
    let expected = perms
        .iter()
        .flat_map(|v| perms.iter().map(move |w| (v, w)))
        .filter(|(v, w)| v.bruhat_leq(w).unwrap_or(false))
        .count();
    (atlas.len() == expected).then_some(atlas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let built = load_or_build(dir.path(), 3).unwrap();
        let path = cache_path(dir.path(), 3);
        let text = fs::read_to_string(&path).unwrap();
        let loaded = decode(&text, 3).unwrap();
        assert_eq!(loaded.len(), built.len());
        for (a, b) in loaded.cells().iter().zip(built.cells()) {
            assert_eq!(a.symbolic(), b.symbolic());
            assert_eq!(a.exponents(), b.exponents());
        }
        assert!(decode(&text, 4).is_none());

        // a changed coefficient breaks the digest
        let tampered = text.replacen("[\"1\",", "[\"2\",", 1);
        assert_ne!(tampered, text);
        assert!(decode(&tampered, 3).is_none());

        fs::write(&path, "not json").unwrap();
        let rebuilt = load_or_build(dir.path(), 3).unwrap();
        assert_eq!(rebuilt.len(), built.len());
        assert!(decode(&fs::read_to_string(&path).unwrap(), 3).is_some());
    }
}
