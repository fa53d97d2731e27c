//! The `analyze` report: normal-structure invariants of one group.

use std::fmt;

use crate::group::Group;
use crate::structure::{is_semisimple, soc_factors, socle, solvable_radical, StructureError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub order: usize,
    pub semisimple: bool,
    pub radical_order: usize,
    pub socle_order: usize,
    /// Orders of the simple socle factors; only for semisimple groups.
    pub factor_orders: Option<Vec<usize>>,
    pub pker_order: Option<usize>,
}

pub fn analyze(g: &Group) -> Result<StructureReport, StructureError> {
    let semisimple = is_semisimple(g);
    let (factor_orders, pker_order) = if semisimple {
        let dec = soc_factors(g)?;
        (
            Some(dec.factors().iter().map(|f| f.order()).collect()),
            Some(dec.pker().order()),
        )
    } else {
        (None, None)
    };
    Ok(StructureReport {
        order: g.order(),
        semisimple,
        radical_order: solvable_radical(g).order(),
        socle_order: socle(g).order(),
        factor_orders,
        pker_order,
    })
}

impl StructureReport {
    /// One `key=value` line per invariant, in a fixed order.
    pub fn key_values(&self) -> String {
        let factors = match &self.factor_orders {
            Some(f) => format!("[{}]", f.iter().map(usize::to_string).collect::<Vec<_>>().join(",")),
            None => "none".into(),
        };
        let pker = self.pker_order.map_or("none".into(), |p| p.to_string());
        format!(
            "order={}\nsemisimple={}\nrad={}\nsoc={}\nfactors={factors}\npker={pker}\n",
            self.order, self.semisimple, self.radical_order, self.socle_order
        )
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order:        {}", self.order)?;
        writeln!(f, "semisimple:   {}", self.semisimple)?;
        writeln!(f, "|rad|:        {}", self.radical_order)?;
        writeln!(f, "|Soc|:        {}", self.socle_order)?;
        match &self.factor_orders {
            Some(orders) => writeln!(f, "factors:      {orders:?}")?,
            None => writeln!(f, "factors:      (not semisimple)")?,
        }
        match self.pker_order {
            Some(p) => writeln!(f, "|PKer|:       {p}"),
            None => writeln!(f, "|PKer|:       (not semisimple)"),
        }
    }
}
