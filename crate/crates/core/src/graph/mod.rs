//! Property graph storage: the in-memory graph, flat-file importers, the
//! source-subset filter and snapshots for concurrent readers.

mod error;
mod import;
mod snapshot;
mod store;
mod subset;
mod value;

pub use error::GraphError;
pub use import::{assemble, load_csv, load_json, to_json, GraphFormat};
pub use snapshot::{GraphSnapshot, GraphStore};
pub use store::{EdgeIdx, EdgeRecord, Properties, PropertyGraph, VertexIdx, VertexRecord};
pub use subset::build_source_subset;
pub use value::PropertyValue;
