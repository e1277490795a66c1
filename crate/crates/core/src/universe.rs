use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};

/// Ordered finite set of named executions.
///
/// Label order is fixed at construction and used as the canonical order for
/// every map printed or serialized over this universe.
#[derive(Clone)]
pub struct ExecutionUniverse {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl ExecutionUniverse {
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(CoreError::EmptyUniverse);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(CoreError::EmptyLabel);
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(CoreError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Arc::new(Self { labels, index }))
    }

    /// Universe `{e0, e1, ..., e(n-1)}`. Panics if `n == 0`.
    pub fn numbered(n: usize) -> Arc<Self> {
        assert!(n > 0, "universe size must be positive");
        Self::new((0..n).map(|i| format!("e{i}"))).expect("generated labels are unique")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }
}

impl PartialEq for ExecutionUniverse {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for ExecutionUniverse {}

impl fmt::Debug for ExecutionUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ExecutionUniverse")
            .field(&self.labels)
            .finish()
    }
}

impl fmt::Display for ExecutionUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

pub(crate) fn same_universe(a: &Arc<ExecutionUniverse>, b: &Arc<ExecutionUniverse>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicates() {
        assert_eq!(
            ExecutionUniverse::new(Vec::<String>::new()).unwrap_err(),
            CoreError::EmptyUniverse
        );
        assert_eq!(
            ExecutionUniverse::new(["a", "b", "a"]).unwrap_err(),
            CoreError::DuplicateLabel("a".into())
        );
        assert_eq!(
            ExecutionUniverse::new(["a", ""]).unwrap_err(),
            CoreError::EmptyLabel
        );
    }

    #[test]
    fn keeps_insertion_order() {
        let u = ExecutionUniverse::new(["z", "a", "m"]).unwrap();
        assert_eq!(u.labels(), ["z", "a", "m"]);
        assert_eq!(u.index_of("a"), Some(1));
        assert_eq!(u.index_of("A"), None);
    }
}
