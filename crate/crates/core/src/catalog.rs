//! The built-in groups, addressable by name.

use crate::group::{Group, GroupError, GroupName};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub group: GroupName,
    pub aliases: &'static [&'static str],
}

impl CatalogEntry {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn build(&self) -> Result<Group, GroupError> {
        Group::named_with_limit(&self.group, usize::MAX)
    }
}

fn entry(group: GroupName, aliases: &'static [&'static str]) -> CatalogEntry {
    CatalogEntry {
        name: group.to_string(),
        group,
        aliases,
    }
}

/// Every catalog group, sorted by order and then by name.
pub fn catalog() -> Vec<CatalogEntry> {
    use GroupName::*;
    let mut all: Vec<CatalogEntry> = (1..=16).map(|n| entry(Cyclic(n), &[])).collect();
    all.push(entry(GroupName::product(Cyclic(2), Cyclic(2)), &["V4"]));
    all.extend((3..=8).map(|m| entry(Dihedral(m), &[])));
    all.extend([
        entry(Quaternion8, &[]),
        entry(Symmetric(3), &[]),
        entry(Symmetric(4), &[]),
        entry(Symmetric(5), &[]),
        entry(Alternating(4), &[]),
        entry(Alternating(5), &[]),
        entry(GroupName::product(Alternating(4), Cyclic(5)), &[]),
        entry(Dihedral(15), &["D30"]),
        entry(Cyclic(60), &[]),
        entry(GroupName::product(Alternating(5), Alternating(5)), &[]),
        entry(GroupName::swap_wreath(Alternating(5)), &[]),
    ]);
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.name.cmp(&b.name)));
    all
}

/// Catalog groups of order at most `max_order`.
pub fn up_to_order(max_order: usize) -> Vec<CatalogEntry> {
    catalog().into_iter().filter(|e| e.order() <= max_order).collect()
}

/// Looks a name up in the catalog (including aliases), falling back to the
/// general name syntax for groups outside it.
pub fn resolve(name: &str) -> Result<GroupName, GroupError> {
    let trimmed = name.trim();
    if let Some(e) = catalog()
        .into_iter()
        .find(|e| e.name == trimmed || e.aliases.contains(&trimmed))
    {
        return Ok(e.group);
    }
    trimmed.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contents() {
        let all = catalog();
        assert_eq!(all.len(), 16 + 1 + 6 + 11);
        assert_eq!(all[0].name, "Z1");
        assert_eq!(all.last().unwrap().order(), 7200);
        assert!(all.iter().any(|e| e.name == "A4xZ5" && e.order() == 60));
    }

    #[test]
    fn aliases() {
        assert_eq!(resolve("D30").unwrap(), GroupName::Dihedral(15));
        assert_eq!(resolve("V4").unwrap().order(), 4);
        assert_eq!(resolve("symmetric(3)").unwrap(), GroupName::Symmetric(3));
    }
}
