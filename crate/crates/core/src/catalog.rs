//! Reference matrices, embedded at build time and re-verified on
//! first use.

use std::sync::OnceLock;

use thiserror::Error;

use crate::aont::{AontParams, LinearAont};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("catalog entry {name} is corrupt: {reason}")]
    Corrupt { name: &'static str, reason: String },
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: AontParams,
    pub aont: LinearAont,
}

struct Raw {
    name: &'static str,
    ti: usize,
    to: usize,
    text: &'static str,
}

macro_rules! raw {
    ($name:literal, $ti:literal, $to:literal, $file:literal) => {
        Raw { name: $name, ti: $ti, to: $to, text: include_str!(concat!("../catalog/", $file)) }
    };
}

const RAW: &[Raw] = &[
    raw!("E232", 2, 3, "e232.txt"),
    raw!("A242", 2, 4, "a242.txt"),
    raw!("A252", 2, 5, "a252.txt"),
    raw!("A262", 2, 6, "a262.txt"),
    raw!("A272", 2, 7, "a272.txt"),
    raw!("A282", 2, 8, "a282.txt"),
    raw!("A233", 2, 3, "a233.txt"),
    raw!("A243", 2, 4, "a243.txt"),
    raw!("A253", 2, 5, "a253.txt"),
    raw!("A263", 2, 6, "a263.txt"),
    raw!("A234", 2, 3, "a234.txt"),
    raw!("A244", 2, 4, "a244.txt"),
    raw!("A254", 2, 5, "a254.txt"),
    raw!("A235", 2, 3, "a235.txt"),
    raw!("A245", 2, 4, "a245.txt"),
    raw!("A237", 2, 3, "a237.txt"),
];

fn load(raw: &Raw) -> Result<CatalogEntry, CatalogError> {
    let corrupt = |reason: String| CatalogError::Corrupt { name: raw.name, reason };
    let m = Matrix::parse(raw.text).map_err(|e| corrupt(e.to_string()))?;
    let aont = LinearAont::new(m, raw.ti, raw.to).map_err(|e| corrupt(e.to_string()))?;
    Ok(CatalogEntry { name: raw.name, params: aont.params(), aont })
}

/// Every catalog entry, verified. Fails if any embedded matrix does not pass
/// the rank criterion at its stated parameters.
pub fn catalog() -> Result<&'static [CatalogEntry], CatalogError> {
    static CATALOG: OnceLock<Result<Vec<CatalogEntry>, CatalogError>> = OnceLock::new();
    CATALOG
        .get_or_init(|| RAW.iter().map(load).collect())
        .as_ref()
        .map(Vec::as_slice)
        .map_err(Clone::clone)
}

/// The embedded matrix file for `name` (case-insensitive), unverified.
pub fn raw_text(name: &str) -> Option<&'static str> {
    RAW.iter().find(|r| r.name.eq_ignore_ascii_case(name)).map(|r| r.text)
}

pub fn by_name(name: &str) -> Result<Option<&'static CatalogEntry>, CatalogError> {
    Ok(catalog()?.iter().find(|e| e.name.eq_ignore_ascii_case(name)))
}

pub fn catalog_lookup(ti: usize, to: usize, s: usize, q: u32) -> Result<Option<LinearAont>, CatalogError> {
    let want = AontParams { ti, to, s, q };
    Ok(catalog()?.iter().find(|e| e.params == want).map(|e| e.aont.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_verify() {
        let cat = catalog().unwrap();
        assert_eq!(cat.len(), 16);
    }

    #[test]
    fn lookup() {
        let a = catalog_lookup(2, 4, 5, 2).unwrap().unwrap();
        assert_eq!(a.matrix().to_text(), raw_text("a242").unwrap());
        let a = catalog_lookup(2, 3, 8, 7).unwrap().unwrap();
        assert_eq!(a.matrix().row(4), &[1, 2, 3, 5, 3, 0, 1, 3]);
        assert!(catalog_lookup(9, 9, 9, 2).unwrap().is_none());
        assert!(by_name("e232").unwrap().is_some());
    }

    #[test]
    fn files_round_trip_bit_exact() {
        for r in RAW {
            assert_eq!(Matrix::parse(r.text).unwrap().to_text(), r.text, "{}", r.name);
        }
    }
}
