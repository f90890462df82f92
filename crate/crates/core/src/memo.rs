//! Process-wide read-mostly caches keyed by small tuples.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, OnceLock, RwLock};

pub struct Memo<K, V> {
    map: OnceLock<RwLock<HashMap<K, Arc<V>>>>,
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    pub const fn new() -> Self {
        Memo { map: OnceLock::new() }
    }

    pub fn get_or_insert_with(&self, key: &K, f: impl FnOnce() -> V) -> Arc<V> {
        let map = self.map.get_or_init(Default::default);
        if let Some(v) = map.read().expect("cache lock").get(key) {
            return v.clone();
        }
        // computed outside the lock; a racing duplicate is discarded
        let v = Arc::new(f());
        map.write().expect("cache lock").entry(key.clone()).or_insert(v).clone()
    }
}
