use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SCHEMA_VERSION;

use super::{build_city_grid, CitySelection, Point, Square};

/// Node process an instance was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Process {
    /// Exactly `n` i.i.d. nodes.
    Binomial { n: u64 },
    /// Poisson number of nodes with the given mean.
    Poisson { n: f64 },
}

/// A sampled node set.
///
/// `city_of[i]` is the selection index of the city holding node `i`. For
/// instances spread over the whole unit square there is no selection and
/// every node belongs to the single pseudo-city `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub nodes: Vec<Point>,
    pub city_of: Vec<usize>,
    pub process: Process,
    pub seed: u64,
    pub selection: Option<CitySelection>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    schema_version: u32,
    r: Option<f64>,
    s: Option<f64>,
    #[serde(rename = "N")]
    n_cities: usize,
    selected_cities: Vec<[i64; 2]>,
    process: Process,
    seed: u64,
    nodes: Vec<Point>,
    city_of: Vec<usize>,
}

impl Instance {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn city_count(&self) -> usize {
        self.selection.as_ref().map_or(1, CitySelection::len)
    }

    /// Square node `i` must lie in.
    pub fn region_of(&self, i: usize) -> Square {
        match &self.selection {
            Some(sel) => sel.square(self.city_of[i]),
            None => Square::UNIT,
        }
    }

    /// Node indices of city `l`, in increasing order.
    pub fn nodes_in_city(&self, l: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.city_of[i] == l).collect()
    }

    pub fn city_points(&self, l: usize) -> Vec<Point> {
        self.nodes_in_city(l).into_iter().map(|i| self.nodes[i]).collect()
    }

    /// `N_l` for every selected city.
    pub fn city_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.city_count()];
        for &l in &self.city_of {
            counts[l] += 1;
        }
        counts
    }

    /// Checks node/city bookkeeping: lengths match, labels are in range and
    /// every node lies in its square.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.city_of.len() {
            return Err(Error::param("nodes and city_of differ in length"));
        }
        if let Process::Binomial { n } = self.process {
            if self.nodes.len() as u64 != n {
                return Err(Error::param(format!("binomial instance with n={n} holds {} nodes", self.nodes.len())));
            }
        }
        let cities = self.city_count();
        for (i, (&p, &l)) in self.nodes.iter().zip(&self.city_of).enumerate() {
            if l >= cities {
                return Err(Error::param(format!("node {i} assigned to unknown city {l}")));
            }
            if !self.region_of(i).contains(p) {
                return Err(Error::Containment { index: i, x: p.x, y: p.y });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let (r, s, coords) = match &self.selection {
            Some(sel) => (
                Some(sel.grid().r()),
                Some(sel.grid().s()),
                sel.lattice_coords().iter().map(|&(i, j)| [i, j]).collect(),
            ),
            None => (None, None, Vec::new()),
        };
        let doc = InstanceDoc {
            schema_version: SCHEMA_VERSION,
            r,
            s,
            n_cities: self.city_count(),
            selected_cities: coords,
            process: self.process,
            seed: self.seed,
            nodes: self.nodes.clone(),
            city_of: self.city_of.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::param(format!("unsupported schema_version {}", doc.schema_version)));
        }
        let selection = match (doc.r, doc.s) {
            (Some(r), Some(s)) => {
                let grid = build_city_grid(r, s)?;
                let ids = doc
                    .selected_cities
                    .iter()
                    .map(|&[i, j]| grid.id_of((i, j)).ok_or_else(|| Error::param(format!("city ({i},{j}) off the grid"))))
                    .collect::<Result<Vec<_>>>()?;
                Some(CitySelection::from_indices(grid, ids)?)
            }
            (None, None) => None,
            _ => return Err(Error::param("r and s must be given together")),
        };
        let inst = Instance { nodes: doc.nodes, city_of: doc.city_of, process: doc.process, seed: doc.seed, selection };
        if inst.city_count() != doc.n_cities {
            return Err(Error::param(format!("N={} but {} cities listed", doc.n_cities, inst.city_count())));
        }
        inst.validate()?;
        Ok(inst)
    }
}
