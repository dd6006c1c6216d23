//! Group catalog files: a line-based text format carrying permutation
//! generators for small groups under "order.index" identifiers.
//!
//! ```text
//! # comment
//! GROUP 5.1 PERMDEG 5
//! GEN 1 2 3 4 0
//! END
//! ```
//!
//! The digest is taken over the canonical dump, so load -> dump -> load
//! reproduces it bit-exactly regardless of comments or record order in
//! the source file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Permutation, MAX_GROUP_ORDER};

pub struct GroupCatalog {
    groups: BTreeMap<(u64, u64), Arc<FiniteGroup>>,
    digest: String,
}

impl std::fmt::Debug for GroupCatalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupCatalog({} groups, {})", self.groups.len(), self.digest)
    }
}

impl GroupCatalog {
    pub fn empty() -> Self {
        let mut cat = GroupCatalog {
            groups: BTreeMap::new(),
            digest: String::new(),
        };
        cat.digest = sha256_hex(&cat.dump());
        cat
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut groups = BTreeMap::new();
        let mut lines = text.lines().enumerate().peekable();
        while let Some((lineno, raw)) = lines.next() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let header: Vec<&str> = line.split_whitespace().collect();
            if header.len() != 4 || header[0] != "GROUP" || header[2] != "PERMDEG" {
                return Err(Error::CatalogParse {
                    line: lineno + 1,
                    message: format!("expected 'GROUP <order>.<index> PERMDEG <d>', got {raw:?}"),
                });
            }
            let id = header[1];
            let (order, index) = parse_id(id).ok_or(Error::CatalogParse {
                line: lineno + 1,
                message: format!("invalid id {id:?}"),
            })?;
            let degree: usize = header[3].parse().map_err(|_| Error::CatalogParse {
                line: lineno + 1,
                message: format!("invalid degree {:?}", header[3]),
            })?;

            let mut gens = Vec::new();
            loop {
                let Some((lineno, raw)) = lines.next() else {
                    return Err(Error::CatalogParse {
                        line: lineno + 1,
                        message: format!("unterminated record for {id}"),
                    });
                };
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                if line == "END" {
                    break;
                }
                let Some(images) = line.strip_prefix("GEN ") else {
                    return Err(Error::CatalogParse {
                        line: lineno + 1,
                        message: format!("expected GEN or END, got {raw:?}"),
                    });
                };
                let images: Vec<u16> = images
                    .split_whitespace()
                    .map(|t| t.parse::<u16>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::CatalogParse {
                        line: lineno + 1,
                        message: "invalid image list".into(),
                    })?;
                if images.len() != degree {
                    return Err(Error::CatalogParse {
                        line: lineno + 1,
                        message: format!("expected {degree} images, got {}", images.len()),
                    });
                }
                gens.push(Permutation::from_images(images).map_err(|e| Error::CatalogParse {
                    line: lineno + 1,
                    message: e.to_string(),
                })?);
            }

            let group = FiniteGroup::with_catalog_id(&gens, degree, MAX_GROUP_ORDER, id)?;
            if group.order() as u64 != order {
                return Err(Error::OrderMismatch {
                    id: id.to_string(),
                    declared: order as usize,
                    actual: group.order(),
                });
            }
            if groups.insert((order, index), group).is_some() {
                return Err(Error::DuplicateId(id.to_string()));
            }
        }
        let mut cat = GroupCatalog {
            groups,
            digest: String::new(),
        };
        cat.digest = sha256_hex(&cat.dump());
        Ok(cat)
    }

    /// Canonical rendering: records sorted by (order, index), no comments.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for ((order, index), group) in &self.groups {
            writeln!(out, "GROUP {order}.{index} PERMDEG {}", group.degree()).unwrap();
            for g in group.generators() {
                let images: Vec<String> = g.images().iter().map(|x| x.to_string()).collect();
                writeln!(out, "GEN {}", images.join(" ")).unwrap();
            }
            writeln!(out, "END").unwrap();
        }
        out
    }

    /// SHA-256 of the canonical dump, as lowercase hex.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Arc<FiniteGroup>> {
        parse_id(id).and_then(|key| self.groups.get(&key))
    }

    pub fn groups_of_order(&self, order: u64) -> Vec<Arc<FiniteGroup>> {
        self.groups
            .range((order, 0)..(order + 1, 0))
            .map(|(_, g)| Arc::clone(g))
            .collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.groups
            .keys()
            .map(|(o, i)| format!("{o}.{i}"))
            .collect()
    }

    /// Sorted distinct orders present in the catalog.
    pub fn orders(&self) -> Vec<u64> {
        let mut orders: Vec<u64> = self.groups.keys().map(|&(o, _)| o).collect();
        orders.dedup();
        orders
    }
}

fn parse_id(id: &str) -> Option<(u64, u64)> {
    let (o, i) = id.split_once('.')?;
    Some((o.parse().ok()?, i.parse().ok()?))
}

fn sha256_hex(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
