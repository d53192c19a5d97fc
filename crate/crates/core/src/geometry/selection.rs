use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

use super::{CityGrid, Point, Square};

/// `N` cities of a [`CityGrid`] whose lattice coordinates form a connected
/// subgraph of `Z²` (nearest-neighbour adjacency).
///
/// Selected cities are referred to by their position `l` in `indices`
/// ("selection index"); `indices[l]` is the grid id.
#[derive(Debug, Clone, PartialEq)]
pub struct CitySelection {
    grid: CityGrid,
    indices: Vec<usize>,
    lattice_coords: Vec<(i64, i64)>,
}

impl CitySelection {
    /// Validates and wraps an explicit list of grid ids.
    pub fn from_indices(grid: CityGrid, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::param("a selection needs at least one city"));
        }
        let mut seen = vec![false; grid.city_count()];
        for &id in &indices {
            if id >= grid.city_count() {
                return Err(Error::param(format!("city id {id} outside a grid of {} cities", grid.city_count())));
            }
            if std::mem::replace(&mut seen[id], true) {
                return Err(Error::param(format!("city id {id} selected twice")));
            }
        }
        let lattice_coords = indices.iter().map(|&id| grid.lattice(id)).collect();
        let sel = CitySelection { grid, indices, lattice_coords };
        if !sel.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(sel)
    }

    /// Every city of the grid.
    pub fn full(grid: CityGrid) -> Self {
        let indices = (0..grid.city_count()).collect();
        Self::from_indices(grid, indices).expect("full grid is connected")
    }

    pub fn grid(&self) -> &CityGrid {
        &self.grid
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn lattice_coords(&self) -> &[(i64, i64)] {
        &self.lattice_coords
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn square(&self, l: usize) -> Square {
        self.grid.square(self.indices[l])
    }

    /// Selection index of the city containing `p`.
    pub fn locate(&self, p: Point) -> Option<usize> {
        let id = self.grid.locate(p)?;
        self.indices.iter().position(|&c| c == id)
    }

    /// Adjacency lists in selection indices, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut pos = vec![usize::MAX; self.grid.city_count()];
        for (l, &id) in self.indices.iter().enumerate() {
            pos[id] = l;
        }
        self.indices
            .iter()
            .map(|&id| {
                let mut adj: Vec<usize> =
                    self.grid.neighbors(id).map(|nb| pos[nb]).filter(|&l| l != usize::MAX).collect();
                adj.sort_unstable();
                adj
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == adj.len()
    }
}

/// Grows a random connected lattice animal of `n_cities` cells: start from a
/// uniformly chosen city, then repeatedly add a uniformly chosen cell of the
/// current frontier.
pub fn select_well_connected(grid: &CityGrid, n_cities: usize, seed: u64) -> Result<CitySelection> {
    let total = grid.city_count();
    if n_cities == 0 || n_cities > total {
        return Err(Error::param(format!("need 1 <= N <= {total} cities, got N={n_cities}")));
    }
    let mut rng = stream(seed, Purpose::Selection);
    let mut chosen = Vec::with_capacity(n_cities);
    let mut seen = vec![false; total];
    let mut frontier = Vec::new();
    let start = rng.random_range(0..total);
    seen[start] = true;
    frontier.push(start);
    // the first pop takes `start`, since it is the only entry
    while chosen.len() < n_cities {
        let pick = rng.random_range(0..frontier.len());
        let id = frontier.swap_remove(pick);
        chosen.push(id);
        for nb in grid.neighbors(id) {
            if !seen[nb] {
                seen[nb] = true;
                frontier.push(nb);
            }
        }
    }
    CitySelection::from_indices(grid.clone(), chosen)
}
