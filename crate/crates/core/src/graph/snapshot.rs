use std::ops::Deref;
use std::sync::{Arc, RwLock};

use super::{build_source_subset, PropertyGraph};
use crate::policy::Meta;

/// Immutable, cheaply clonable view of a graph. A snapshot never observes
/// later writes to the store it was taken from.
#[derive(Debug, Clone)]
pub struct GraphSnapshot(Arc<PropertyGraph>);

impl GraphSnapshot {
    pub fn new(graph: PropertyGraph) -> Self {
        GraphSnapshot(Arc::new(graph))
    }
}

impl Deref for GraphSnapshot {
    type Target = PropertyGraph;

    fn deref(&self) -> &PropertyGraph {
        &self.0
    }
}

impl From<PropertyGraph> for GraphSnapshot {
    fn from(graph: PropertyGraph) -> Self {
        GraphSnapshot::new(graph)
    }
}

/// Holder of the live graph. Writers mutate copy-on-write; readers take
/// snapshots. Replacing the graph is a single pointer swap.
#[derive(Debug, Default)]
pub struct GraphStore {
    live: RwLock<Arc<PropertyGraph>>,
}

impl GraphStore {
    pub fn new(graph: PropertyGraph) -> Self {
        GraphStore {
            live: RwLock::new(Arc::new(graph)),
        }
    }

    pub fn snapshot(&self) -> GraphSnapshot {
        GraphSnapshot(Arc::clone(&self.live.read().expect("graph lock poisoned")))
    }

    /// Mutates the live graph. Outstanding snapshots keep the old version.
    pub fn update<R>(&self, f: impl FnOnce(&mut PropertyGraph) -> R) -> R {
        let mut live = self.live.write().expect("graph lock poisoned");
        f(Arc::make_mut(&mut live))
    }

    pub fn replace(&self, graph: PropertyGraph) {
        *self.live.write().expect("graph lock poisoned") = Arc::new(graph);
    }

    /// Rebuilds the subset graph from `source` and swaps it in.
    pub fn rebuild_subset(&self, meta: &Meta, source: &PropertyGraph) {
        self.replace(build_source_subset(meta, source));
    }
}
