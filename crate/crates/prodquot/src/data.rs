//! Bundled data: the group catalog and the regression tables, embedded so
//! the CLI and tests run without external files.
//!
//! `data/catalog.txt` is regenerated by the `gen_catalog` example; the
//! tables in `data/tables.csv` are transcribed reference rows (four of
//! them are internally inconsistent in the source material and ship as
//! `expected = flagged`).

use crate::catalog::GroupCatalog;
use crate::error::Result;
use crate::tables::{parse_table_csv, TableRow};

pub const BUNDLED_CATALOG: &str = include_str!("../data/catalog.txt");
pub const BUNDLED_TABLES: &str = include_str!("../data/tables.csv");

pub fn bundled_catalog() -> GroupCatalog {
    GroupCatalog::parse(BUNDLED_CATALOG).expect("bundled catalog is valid")
}

pub fn bundled_tables() -> Result<Vec<TableRow>> {
    parse_table_csv(BUNDLED_TABLES)
}
