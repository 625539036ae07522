use indexmap::IndexSet;

/// Bookkeeping cost charged per stored state on top of its key bytes: the
/// hash-table slot, the boxed key header and the parent record.
pub const ENTRY_OVERHEAD: u64 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("visited store would exceed its budget of {budget} bytes")]
pub struct BudgetExceeded {
    pub budget: u64,
}

/// Visited states keyed by canonical encoding, with ids in discovery order
/// and the parent edge of each state's first discovery.
#[derive(Debug)]
pub struct VisitedStore {
    keys: IndexSet<Box<[u8]>>,
    /// `(predecessor id, index of the edge in the predecessor's successor
    /// list)`; `None` for initial states.
    parents: Vec<Option<(u32, u32)>>,
    bytes: u64,
    budget: u64,
}

impl VisitedStore {
    pub fn new(budget: u64) -> Self {
        VisitedStore {
            keys: IndexSet::new(),
            parents: Vec::new(),
            bytes: 0,
            budget,
        }
    }

    /// Returns the id of `key` and whether it was already present. The
    /// parent is only recorded on first insertion.
    pub fn lookup_or_insert(
        &mut self,
        key: Vec<u8>,
        parent: Option<(u32, u32)>,
    ) -> Result<(u32, bool), BudgetExceeded> {
        if let Some(id) = self.keys.get_index_of(key.as_slice()) {
            return Ok((id as u32, true));
        }
        let cost = key.len() as u64 + ENTRY_OVERHEAD;
        if self.bytes + cost > self.budget {
            return Err(BudgetExceeded {
                budget: self.budget,
            });
        }
        self.bytes += cost;
        let (id, _) = self.keys.insert_full(key.into_boxed_slice());
        self.parents.push(parent);
        Ok((id as u32, false))
    }

    pub fn id_of(&self, key: &[u8]) -> Option<u32> {
        self.keys.get_index_of(key).map(|i| i as u32)
    }

    pub fn key(&self, id: u32) -> &[u8] {
        &self.keys[id as usize]
    }

    pub fn parent(&self, id: u32) -> Option<(u32, u32)> {
        self.parents[id as usize]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Accounted size; the store never shrinks, so this is also the peak.
    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    /// Charges memory held outside the store (search stacks, graphs).
    pub fn charge(&mut self, bytes: u64) -> Result<(), BudgetExceeded> {
        if self.bytes + bytes > self.budget {
            return Err(BudgetExceeded {
                budget: self.budget,
            });
        }
        self.bytes += bytes;
        Ok(())
    }

    /// Path of ids from an initial state to `id` along parent edges.
    pub fn parent_path(&self, id: u32) -> Vec<u32> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some((p, _)) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}
