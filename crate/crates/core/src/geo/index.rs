use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::{Region, Venue};

/// Rectangle with closed lower edges. The upper edges are closed only when
/// flagged, so the four quadrants of a cell partition it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cell {
    pub(crate) region: Region,
    pub(crate) closed_lat_max: bool,
    pub(crate) closed_lon_max: bool,
}

impl Cell {
    pub(crate) fn root(region: Region) -> Self {
        Cell {
            region,
            closed_lat_max: true,
            closed_lon_max: true,
        }
    }

    #[inline]
    pub(crate) fn contains(&self, lat: f64, lon: f64) -> bool {
        let r = &self.region;
        lat >= r.lat_min
            && (lat < r.lat_max || (self.closed_lat_max && lat == r.lat_max))
            && lon >= r.lon_min
            && (lon < r.lon_max || (self.closed_lon_max && lon == r.lon_max))
    }

    /// Quadrants in order SW, SE, NW, NE.
    pub(crate) fn quadrants(&self) -> [Cell; 4] {
        let r = self.region;
        let lat_mid = r.lat_min + (r.lat_max - r.lat_min) / 2.0;
        let lon_mid = r.lon_min + (r.lon_max - r.lon_min) / 2.0;
        let cell = |lat_min, lat_max, lon_min, lon_max, closed_lat_max, closed_lon_max| Cell {
            region: Region {
                lat_min,
                lat_max,
                lon_min,
                lon_max,
            },
            closed_lat_max,
            closed_lon_max,
        };
        [
            cell(r.lat_min, lat_mid, r.lon_min, lon_mid, false, false),
            cell(
                r.lat_min,
                lat_mid,
                lon_mid,
                r.lon_max,
                false,
                self.closed_lon_max,
            ),
            cell(
                lat_mid,
                r.lat_max,
                r.lon_min,
                lon_mid,
                self.closed_lat_max,
                false,
            ),
            cell(
                lat_mid,
                r.lat_max,
                lon_mid,
                r.lon_max,
                self.closed_lat_max,
                self.closed_lon_max,
            ),
        ]
    }

    /// True once the split no longer produces distinct coordinates.
    pub(crate) fn is_degenerate(&self) -> bool {
        let r = &self.region;
        let lat_mid = r.lat_min + (r.lat_max - r.lat_min) / 2.0;
        let lon_mid = r.lon_min + (r.lon_max - r.lon_min) / 2.0;
        lat_mid <= r.lat_min || lat_mid >= r.lat_max || lon_mid <= r.lon_min || lon_mid >= r.lon_max
    }
}

/// Static 2-d tree over venues. Answers rectangle queries the way a
/// rate-limited venue API would: at most `K` results and a truncation flag.
#[derive(Debug, Clone)]
pub struct VenueIndex {
    // Implicit tree: the median of each range splits it, axis alternating
    // latitude (even depth) and longitude (odd depth).
    points: Vec<Venue>,
}

fn axis_key(v: &Venue, depth: usize) -> f64 {
    if depth % 2 == 0 {
        v.lat
    } else {
        v.lon
    }
}

fn build(points: &mut [Venue], depth: usize) {
    if points.len() <= 1 {
        return;
    }
    let mid = points.len() / 2;
    points.select_nth_unstable_by(mid, |a, b| {
        axis_key(a, depth)
            .partial_cmp(&axis_key(b, depth))
            .unwrap_or(Ordering::Equal)
            .then(a.id.cmp(&b.id))
    });
    let (left, right) = points.split_at_mut(mid);
    build(left, depth + 1);
    build(&mut right[1..], depth + 1);
}

impl VenueIndex {
    pub fn new(mut venues: Vec<Venue>) -> Result<Self> {
        if let Some(v) = venues.iter().find(|v| !v.is_valid()) {
            return Err(Error::InvalidParameter(format!(
                "venue {} has invalid coordinates ({}, {})",
                v.id, v.lat, v.lon
            )));
        }
        let mut ids: Vec<_> = venues.iter().map(|v| v.id).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "duplicate venue id {}",
                w[0]
            )));
        }
        build(&mut venues, 0);
        Ok(VenueIndex { points: venues })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All venues in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = &Venue> + '_ {
        self.points.iter()
    }

    /// Up to `cap` venues in `region` (bounds inclusive) and whether more
    /// exist. When truncated, the `cap` venues with the smallest ids are
    /// returned. Results are sorted by id.
    pub fn query_region(&self, region: &Region, cap: usize) -> Result<(Vec<Venue>, bool)> {
        if cap == 0 {
            return Err(Error::InvalidParameter(
                "query cap K must be at least 1".into(),
            ));
        }
        region.validate()?;
        let mut all = Vec::new();
        self.collect(&Cell::root(*region), usize::MAX, &mut all);
        all.sort_unstable_by_key(|v| v.id);
        let truncated = all.len() > cap;
        all.truncate(cap);
        Ok((all, truncated))
    }

    /// Venues of `cell`, stopping once more than `cap` are found. The
    /// returned list is sorted by id when not truncated.
    pub(crate) fn query_cell(&self, cell: &Cell, cap: usize) -> (Vec<Venue>, bool) {
        let mut out = Vec::new();
        self.collect(cell, cap.saturating_add(1), &mut out);
        let truncated = out.len() > cap;
        if truncated {
            out.truncate(cap);
        } else {
            out.sort_unstable_by_key(|v| v.id);
        }
        (out, truncated)
    }

    #[cfg(test)]
    pub(crate) fn count_cell(&self, cell: &Cell) -> usize {
        let mut out = Vec::new();
        self.collect(cell, usize::MAX, &mut out);
        out.len()
    }

    fn collect(&self, cell: &Cell, limit: usize, out: &mut Vec<Venue>) {
        let mut stack = vec![(0usize, self.points.len(), 0usize)];
        while let Some((lo, hi, depth)) = stack.pop() {
            if lo >= hi {
                continue;
            }
            let mid = lo + (hi - lo) / 2;
            let v = self.points[mid];
            if cell.contains(v.lat, v.lon) {
                out.push(v);
                if out.len() >= limit {
                    return;
                }
            }
            let key = axis_key(&v, depth);
            let (min, max) = if depth % 2 == 0 {
                (cell.region.lat_min, cell.region.lat_max)
            } else {
                (cell.region.lon_min, cell.region.lon_max)
            };
            // Left keys are <= key, right keys are >= key.
            if min <= key {
                stack.push((lo, mid, depth + 1));
            }
            if key <= max {
                stack.push((mid + 1, hi, depth + 1));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> VenueIndex {
        let mut vs = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                vs.push(Venue {
                    id: i * 10 + j,
                    lat: i as f64,
                    lon: j as f64,
                });
            }
        }
        VenueIndex::new(vs).unwrap()
    }

    #[test]
    fn empty_region_returns_nothing() {
        let idx = grid();
        let r = Region::new(20.0, 30.0, 20.0, 30.0).unwrap();
        assert_eq!(idx.query_region(&r, 5).unwrap(), (vec![], false));
    }

    #[test]
    fn cap_boundaries() {
        let idx = grid();
        // Row 0, columns 0..=3: four venues.
        let r = Region::new(-0.5, 0.5, -0.5, 3.0).unwrap();
        let (vs, t) = idx.query_region(&r, 4).unwrap();
        assert_eq!((vs.len(), t), (4, false));
        let (vs, t) = idx.query_region(&r, 3).unwrap();
        assert!(t);
        assert_eq!(vs.iter().map(|v| v.id).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let vs: Vec<Venue> = (0..500)
            .map(|id| Venue {
                id,
                lat: rng.gen_range(40.0..41.0),
                lon: rng.gen_range(-74.0..-73.0),
            })
            .collect();
        let idx = VenueIndex::new(vs.clone()).unwrap();
        for _ in 0..100 {
            let a: f64 = rng.gen_range(40.0..41.0);
            let b: f64 = rng.gen_range(-74.0..-73.0);
            let r = Region::new(a, a + 0.3, b, b + 0.2).unwrap();
            let mut expect: Vec<usize> = vs
                .iter()
                .filter(|v| r.contains(v.lat, v.lon))
                .map(|v| v.id)
                .collect();
            expect.sort_unstable();
            let (got, t) = idx.query_region(&r, 1000).unwrap();
            assert!(!t);
            assert_eq!(got.iter().map(|v| v.id).collect::<Vec<_>>(), expect);
        }
    }

    #[test]
    fn quadrants_partition_cell() {
        let idx = grid();
        let root = Cell::root(Region::new(0.0, 9.0, 0.0, 9.0).unwrap());
        let total: usize = root.quadrants().iter().map(|q| idx.count_cell(q)).sum();
        assert_eq!(total, 100);
        assert_eq!(idx.count_cell(&root), 100);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = Venue {
            id: 0,
            lat: 95.0,
            lon: 0.0,
        };
        assert!(VenueIndex::new(vec![bad]).is_err());
        let v = Venue {
            id: 1,
            lat: 0.0,
            lon: 0.0,
        };
        assert!(VenueIndex::new(vec![v, v]).is_err());
        assert!(grid().query_region(&Region::nyc(), 0).is_err());
    }
}
