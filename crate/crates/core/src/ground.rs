//! Ground set, item sets, and feasible assignments.
//!
//! Items carry dense integer ids `0..num_items`, grouped into K disjoint
//! position partitions. An assignment holds at most one item per partition.
//! Item sets are bitsets so oracle evaluation and enumeration loops stay
//! cheap.

use crate::error::{Error, Result};

/// Dense item identifier, unique across the whole ground set.
pub type ItemId = usize;

/// The K disjoint position partitions and their items.
///
/// Ids must be dense: the partitions together hold exactly `0..num_items`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    partitions: Vec<Vec<ItemId>>,
    partition_of: Vec<u32>,
}

impl GroundSet {
    /// Build from explicit per-partition item lists.
    pub fn new(partitions: Vec<Vec<ItemId>>) -> Result<Self> {
        if partitions.is_empty() {
            return Err(Error::invalid("ground set needs at least one partition"));
        }
        let num_items: usize = partitions.iter().map(|p| p.len()).sum();
        let mut partition_of = vec![u32::MAX; num_items];
        for (k, part) in partitions.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::invalid(format!("partition {k} is empty")));
            }
            for &item in part {
                if item >= num_items {
                    return Err(Error::invalid(format!(
                        "item id {item} out of dense range 0..{num_items}"
                    )));
                }
                if partition_of[item] != u32::MAX {
                    return Err(Error::invalid(format!(
                        "item id {item} appears in more than one partition"
                    )));
                }
                partition_of[item] = k as u32;
            }
        }
        Ok(GroundSet {
            partitions,
            partition_of,
        })
    }

    /// Contiguous-id construction: partition k holds the next `sizes[k]` ids.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut next = 0;
        let partitions = sizes
            .iter()
            .map(|&n| {
                let part: Vec<ItemId> = (next..next + n).collect();
                next += n;
                part
            })
            .collect();
        GroundSet::new(partitions)
    }

    pub fn num_items(&self) -> usize {
        self.partition_of.len()
    }

    pub fn num_partitions(&self) -> usize {
        self.partitions.len()
    }

    pub fn partition(&self, k: usize) -> &[ItemId] {
        &self.partitions[k]
    }

    pub fn partitions(&self) -> &[Vec<ItemId>] {
        &self.partitions
    }

    pub fn partition_of(&self, item: ItemId) -> usize {
        self.partition_of[item] as usize
    }

    pub fn contains_item(&self, item: ItemId) -> bool {
        item < self.partition_of.len()
    }
}

/// A subset of the ground set, stored as a fixed-width bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ItemSet {
    universe: usize,
    words: Vec<u64>,
}

impl ItemSet {
    pub fn empty(universe: usize) -> Self {
        ItemSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn from_items(universe: usize, items: impl IntoIterator<Item = ItemId>) -> Result<Self> {
        let mut set = ItemSet::empty(universe);
        for item in items {
            set.try_insert(item)?;
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Insert without range checking against the universe size is never
    /// exposed; this validates and inserts.
    pub fn try_insert(&mut self, item: ItemId) -> Result<()> {
        if item >= self.universe {
            return Err(Error::invalid(format!(
                "item {item} outside universe 0..{}",
                self.universe
            )));
        }
        self.words[item / 64] |= 1 << (item % 64);
        Ok(())
    }

    /// Insert an id already known to be in range.
    pub fn insert(&mut self, item: ItemId) {
        debug_assert!(item < self.universe);
        self.words[item / 64] |= 1 << (item % 64);
    }

    pub fn remove(&mut self, item: ItemId) {
        debug_assert!(item < self.universe);
        self.words[item / 64] &= !(1 << (item % 64));
    }

    pub fn contains(&self, item: ItemId) -> bool {
        item < self.universe && self.words[item / 64] & (1 << (item % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Copy with one extra item.
    pub fn with(&self, item: ItemId) -> Self {
        let mut out = self.clone();
        out.insert(item);
        out
    }

    /// Ascending id iteration.
    pub fn iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<ItemId> {
        self.iter().collect()
    }

    /// Lexicographic order on the ascending id sequence (shorter prefix wins).
    pub fn lex_cmp(&self, other: &ItemSet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

/// A feasible assignment: at most one item per partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    set: ItemSet,
}

impl Assignment {
    pub fn empty(gs: &GroundSet) -> Self {
        Assignment {
            set: ItemSet::empty(gs.num_items()),
        }
    }

    /// Validate feasibility of an item collection against the ground set.
    pub fn from_items(gs: &GroundSet, items: impl IntoIterator<Item = ItemId>) -> Result<Self> {
        let set = ItemSet::from_items(gs.num_items(), items)?;
        Assignment::from_set(gs, set)
    }

    pub fn from_set(gs: &GroundSet, set: ItemSet) -> Result<Self> {
        if set.universe() != gs.num_items() {
            return Err(Error::invalid("item set universe does not match ground set"));
        }
        let mut used = vec![false; gs.num_partitions()];
        for item in set.iter() {
            let k = gs.partition_of(item);
            if used[k] {
                return Err(Error::invalid(format!(
                    "infeasible: partition {k} holds more than one item"
                )));
            }
            used[k] = true;
        }
        Ok(Assignment { set })
    }

    pub fn set(&self) -> &ItemSet {
        &self.set
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.set.iter()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.set.contains(item)
    }

    /// Per-partition view: `slot[k]` is the item placed at position k, if any.
    pub fn slot_items(&self, gs: &GroundSet) -> Vec<Option<ItemId>> {
        let mut slots = vec![None; gs.num_partitions()];
        for item in self.set.iter() {
            slots[gs.partition_of(item)] = Some(item);
        }
        slots
    }
}
