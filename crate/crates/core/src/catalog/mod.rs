//! Bundled tables, table reproduction, family classification, the
//! published-matrix fetcher and the record store.

mod analysis;
mod classify;
mod fetch;
mod pipeline;
mod report;
mod store;
mod tables;

pub use analysis::{AnalysisCache, CodeAnalysis};
pub use classify::{classify_family, low_weight_words, ClassRep, Classification, ClassifyOptions};
pub use fetch::{
    fetch_published_matrices, matrix_url, FetchOutcome, DEFAULT_MATRIX_URL, MATRIX_URL_ENV, PUBLISHED_COUNT,
};
pub use pipeline::{full_pipeline, record_of, resolve_spec};
pub use report::{reproduce_table, ReportRow, ReproduceOptions, RowStatus, TableId, TableReport};
pub use store::{CatalogRecord, CatalogStore, ClassRecord, MatrixRecord};
pub use tables::{load_bundled_params, parse_index_list, Bundle, MatrixRef, ParamTable, SourceTuple};
