//! The end-to-end classification pipeline for regular surfaces: from
//! `(p_g, gamma, M)` through baskets, signature pairs, group orders,
//! generating-vector search, and dedup, to a report of surfaces and
//! skipped cases.
//!
//! The search is complete relative to the available groups: every
//! (order, signature pair) that survives the numeric filters either
//! contributes its surfaces or lands in the skipped list with a reason.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::basket::{enumerate_baskets, multiplicity_ceiling, Basket};
use crate::catalog::GroupCatalog;
use crate::error::{Error, Result};
use crate::genvec::{hurwitz_reduce, search_tuples, GeneratingVector};
use crate::group::{builtin_groups_of_order, AutLevel, FiniteGroup};
use crate::minimality::{minimality_heuristic, FilterFlags};
use crate::rat::{rat, rat_u64, Rat};
use crate::signature::{enumerate_signatures, robavecchia_filter, Signature};
use crate::surface::{ProductQuotientSurface, SurfaceRecord, SCHEMA_VERSION};

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub max_mult: u64,
    /// Restrict the search to these group orders (None = no restriction).
    pub orders: Option<BTreeSet<u64>>,
    /// Include the built-in constructions alongside the catalog.
    pub use_builtins: bool,
    /// Dedup with the full automorphism group when its candidate count
    /// stays within this budget; past it, inner automorphisms only.
    pub aut_budget: usize,
    /// Node budget per (group, signature) backtracking run.
    pub search_budget: u64,
    pub full_aut: bool,
    pub filters: FilterFlags,
    /// Zero out timing for byte-identical reruns.
    pub deterministic: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_mult: 2,
            orders: None,
            use_builtins: true,
            aut_budget: 1_000_000,
            search_budget: 20_000_000,
            full_aut: true,
            filters: FilterFlags::default(),
            deterministic: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    /// No group of the required order was available.
    NoCatalogGroup,
    /// The vector search or dedup budget was exhausted.
    BudgetExceeded,
    /// Positive quotient genus is outside the implemented search.
    G0PositiveUnsupported,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkipRecord {
    pub order: u64,
    pub basket: Basket,
    pub t1: Signature,
    pub t2: Signature,
    pub reason: SkipReason,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportParams {
    pub pg: u64,
    pub q: u64,
    pub gamma: i64,
    pub max_mult: u64,
    pub orders: Option<Vec<u64>>,
    pub use_builtins: bool,
    pub full_aut: bool,
    pub aut_budget: usize,
    pub search_budget: u64,
    pub filters: FilterFlags,
    pub catalog_digest: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema: String,
    pub params: ReportParams,
    /// Running with max_mult below this ceiling cannot be exhaustive for
    /// the requested (p_g, gamma).
    pub multiplicity_ceiling: u64,
    pub surfaces: Vec<SurfaceRecord>,
    pub skipped: Vec<SkipRecord>,
    pub timing_ms: u64,
}

/// Runs the full pipeline for regular surfaces with the given geometric
/// genus and gamma. Problems never abort the run: unavailable groups and
/// exhausted budgets become skip records.
pub fn existing_surfaces(
    pg: u64,
    gamma: i64,
    catalog: Option<&GroupCatalog>,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport> {
    let start = Instant::now();
    let chi = 1 + pg;
    let gamma_rat = rat(gamma, 1);
    let baskets = enumerate_baskets(chi, &gamma_rat, opts.max_mult, true)?;

    // (basket, s1, s2, order) tasks surviving the numeric filters
    let mut tasks = Vec::new();
    for basket in &baskets {
        let inv = basket.invariants();
        let xi = rat_u64(4 * chi) + rat_u64(2) * &inv.gamma - &inv.mu;
        if xi < rat(1, 2) {
            continue;
        }
        let sigs = enumerate_signatures(&xi, basket, 0);
        for (i, s1) in sigs.iter().enumerate() {
            for s2 in &sigs[i..] {
                let Some(order) =
                    robavecchia_filter(s1, s2, &xi, inv.index, basket.total_multiplicity())
                else {
                    continue;
                };
                if let Some(allowed) = &opts.orders {
                    if !allowed.contains(&order) {
                        continue;
                    }
                }
                tasks.push((basket.clone(), s1.clone(), s2.clone(), order));
            }
        }
    }

    let results: Vec<(Vec<SurfaceRecord>, Vec<SkipRecord>)> = tasks
        .par_iter()
        .map(|(basket, s1, s2, order)| run_task(basket, s1, s2, *order, catalog, opts))
        .collect::<Result<_>>()?;

    let mut surfaces = Vec::new();
    let mut skipped = Vec::new();
    for (mut s, mut k) in results {
        surfaces.append(&mut s);
        skipped.append(&mut k);
    }
    surfaces.sort_by(|a, b| {
        (
            &a.basket,
            &a.t1,
            &a.t2,
            a.order,
            &a.group_id,
            &a.v1,
            &a.v2,
        )
            .cmp(&(&b.basket, &b.t1, &b.t2, b.order, &b.group_id, &b.v1, &b.v2))
    });
    skipped.sort_by(|a, b| {
        (a.order, &a.basket, &a.t1, &a.t2).cmp(&(b.order, &b.basket, &b.t1, &b.t2))
    });

    Ok(ClassificationReport {
        schema: SCHEMA_VERSION.to_string(),
        params: ReportParams {
            pg,
            q: 0,
            gamma,
            max_mult: opts.max_mult,
            orders: opts.orders.as_ref().map(|o| o.iter().copied().collect()),
            use_builtins: opts.use_builtins,
            full_aut: opts.full_aut,
            aut_budget: opts.aut_budget,
            search_budget: opts.search_budget,
            filters: opts.filters,
            catalog_digest: catalog
                .map(|c| c.digest().to_string())
                .unwrap_or_else(|| GroupCatalog::empty().digest().to_string()),
        },
        multiplicity_ceiling: multiplicity_ceiling(chi, &gamma_rat),
        surfaces,
        skipped,
        timing_ms: if opts.deterministic {
            0
        } else {
            start.elapsed().as_millis() as u64
        },
    })
}

fn run_task(
    basket: &Basket,
    s1: &Signature,
    s2: &Signature,
    order: u64,
    catalog: Option<&GroupCatalog>,
    opts: &ClassifyOptions,
) -> Result<(Vec<SurfaceRecord>, Vec<SkipRecord>)> {
    let mut surfaces = Vec::new();
    let mut skipped = Vec::new();
    let skip = |reason: SkipReason| SkipRecord {
        order,
        basket: basket.clone(),
        t1: s1.clone(),
        t2: s2.clone(),
        reason,
    };

    let groups = groups_of_order(order, catalog, opts.use_builtins);
    if groups.is_empty() {
        skipped.push(skip(SkipReason::NoCatalogGroup));
        return Ok((surfaces, skipped));
    }

    for group in groups {
        let (tuples1, exhausted1) = search_tuples(&group, s1, opts.search_budget);
        let (tuples2, exhausted2) = if s1 == s2 {
            (tuples1.clone(), exhausted1)
        } else {
            search_tuples(&group, s2, opts.search_budget)
        };
        if exhausted1 || exhausted2 {
            skipped.push(skip(SkipReason::BudgetExceeded));
            continue;
        }
        if tuples1.is_empty() || tuples2.is_empty() {
            continue;
        }

        let mut cache = crate::surface::PairBasketCache::new(Arc::clone(&group));
        let mut pairs = Vec::new();
        for t1 in &tuples1 {
            for t2 in &tuples2 {
                if &cache.basket(t1, t2) == basket {
                    let v1 = GeneratingVector::new_unchecked(
                        Arc::clone(&group),
                        s1.clone(),
                        t1.clone(),
                    );
                    let v2 = GeneratingVector::new_unchecked(
                        Arc::clone(&group),
                        s2.clone(),
                        t2.clone(),
                    );
                    pairs.push((v1, v2));
                }
            }
        }
        if pairs.is_empty() {
            continue;
        }

        let reduced = hurwitz_reduce(&pairs, opts.full_aut, opts.aut_budget);
        let dedup = match reduced.level {
            AutLevel::Full => "full",
            AutLevel::InnerOnly => "coarse",
        };
        for (v1, v2) in reduced.pairs {
            let surface = ProductQuotientSurface::new(v1, v2)?;
            let mut record = SurfaceRecord::from_surface(&surface, dedup);
            record.minimality = Some(minimality_heuristic(&surface.numerics(), opts.filters));
            surfaces.push(record);
        }
    }
    Ok((surfaces, skipped))
}

/// Groups of a given order: catalog entries first, then built-ins that do
/// not duplicate a catalog group (matching order statistics are treated
/// as the same group).
fn groups_of_order(
    order: u64,
    catalog: Option<&GroupCatalog>,
    use_builtins: bool,
) -> Vec<Arc<FiniteGroup>> {
    let mut groups: Vec<Arc<FiniteGroup>> = catalog
        .map(|c| c.groups_of_order(order))
        .unwrap_or_default();
    if use_builtins {
        let catalog_stats: Vec<Vec<(u32, usize)>> =
            groups.iter().map(|g| g.order_statistics()).collect();
        for b in builtin_groups_of_order(order) {
            if !catalog_stats.contains(&b.order_statistics()) {
                groups.push(b);
            }
        }
    }
    groups
}

/// Cache key for a classification run: every parameter that affects the
/// output, hashed.
pub fn cache_key(pg: u64, gamma: i64, opts: &ClassifyOptions, catalog_digest: &str) -> String {
    let orders = opts
        .orders
        .as_ref()
        .map(|o| {
            o.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .unwrap_or_else(|| "all".into());
    let text = format!(
        "pqc-1|pg={pg}|gamma={gamma}|M={}|orders={orders}|builtins={}|full_aut={}|aut_budget={}|search_budget={}|b3={}|two_curve={}|catalog={catalog_digest}",
        opts.max_mult,
        opts.use_builtins,
        opts.full_aut,
        opts.aut_budget,
        opts.search_budget,
        opts.filters.b_minus_3_cap,
        opts.filters.two_curve_rule,
    );
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Disk-cached variant: reuses a previous run when every key parameter
/// matches, otherwise computes and stores.
pub fn existing_surfaces_cached(
    pg: u64,
    gamma: i64,
    catalog: Option<&GroupCatalog>,
    opts: &ClassifyOptions,
    cache_dir: &Path,
) -> Result<ClassificationReport> {
    let digest = catalog
        .map(|c| c.digest().to_string())
        .unwrap_or_else(|| GroupCatalog::empty().digest().to_string());
    let key = cache_key(pg, gamma, opts, &digest);
    let path = cache_dir.join(format!("{key}.json"));
    if path.exists() {
        let text = std::fs::read_to_string(&path)?;
        let report: ClassificationReport = serde_json::from_str(&text)?;
        return Ok(report);
    }
    let report = existing_surfaces(pg, gamma, catalog, opts)?;
    std::fs::create_dir_all(cache_dir)?;
    std::fs::write(&path, serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

/// CSV export with the table columns `K2,SingX,t1,t2,G`.
pub fn report_to_csv(report: &ClassificationReport) -> String {
    let mut out = String::from("K2,SingX,t1,t2,G\n");
    for s in &report.surfaces {
        out.push_str(&format!(
            "{},\"{}\",\"{}\",\"{}\",{}\n",
            s.k2,
            s.basket,
            s.t1.compact(),
            s.t2.compact(),
            s.group_id
        ));
    }
    out
}

/// One family in the sense of the classification tables: surfaces grouped
/// by (basket, signatures, K^2, group order). A family may contain more
/// than one Hurwitz class; `classes` counts the deduped representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub basket: Basket,
    pub t1: Signature,
    pub t2: Signature,
    #[serde(rename = "K2", with = "crate::rat::rat_string")]
    pub k2: Rat,
    pub order: u64,
    pub group_ids: Vec<String>,
    pub classes: usize,
}

impl ClassificationReport {
    /// The table-row view of the surface list.
    pub fn families(&self) -> Vec<FamilySummary> {
        let mut out: Vec<FamilySummary> = Vec::new();
        for s in &self.surfaces {
            let found = out.iter_mut().find(|f| {
                f.basket == s.basket
                    && f.t1 == s.t1
                    && f.t2 == s.t2
                    && f.k2 == s.k2
                    && f.order == s.order
            });
            match found {
                Some(f) => {
                    f.classes += 1;
                    if !f.group_ids.contains(&s.group_id) {
                        f.group_ids.push(s.group_id.clone());
                    }
                }
                None => out.push(FamilySummary {
                    basket: s.basket.clone(),
                    t1: s.t1.clone(),
                    t2: s.t2.clone(),
                    k2: s.k2.clone(),
                    order: s.order,
                    group_ids: vec![s.group_id.clone()],
                    classes: 1,
                }),
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: ClassificationReport = serde_json::from_str(text)?;
        if report.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema {:?}",
                report.schema
            )));
        }
        Ok(report)
    }
}
