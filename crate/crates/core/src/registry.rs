//! Name-keyed registries of interchangeable strategies.

use crate::error::{Error, Result};

pub trait Named {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
}

/// Strategies behind a common trait, looked up by name at run time.
pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, entries: Vec::new() }
    }

    /// Adds a strategy; a later registration under the same name replaces
    /// the earlier one.
    pub fn register(&mut self, entry: Box<T>) -> &mut Self {
        self.entries.retain(|e| e.name() != entry.name());
        self.entries.push(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.iter().find(|e| e.name() == name).map(|e| &**e).ok_or_else(|| {
            Error::Input(format!("unknown {} '{name}' (available: {})", self.kind, self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|e| &**e)
    }
}
