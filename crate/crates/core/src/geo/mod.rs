//! Venue coordinates, a simulated top-K rectangle query API and the Random
//! Region Zoom-In venue sampler.

mod index;
mod rrzi;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NodeId;

pub use index::VenueIndex;
pub use rrzi::{
    rrzi_draw, rrzi_draw_with, rrzi_vsa_estimate, RrziDraw, RrziVsaReport, MAX_ZOOM_DEPTH,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Venue {
    /// Auxiliary node id.
    pub id: NodeId,
    pub lat: f64,
    pub lon: f64,
}

impl Venue {
    pub fn is_valid(&self) -> bool {
        (-90.0..=90.0).contains(&self.lat) && (-180.0..=180.0).contains(&self.lon)
    }
}

/// Axis-aligned latitude/longitude rectangle, bounds inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl Region {
    pub fn new(lat_min: f64, lat_max: f64, lon_min: f64, lon_max: f64) -> Result<Self> {
        let r = Region {
            lat_min,
            lat_max,
            lon_min,
            lon_max,
        };
        r.validate()?;
        Ok(r)
    }

    /// New York City box: latitude 40.4 to 41.4, longitude -74.3 to -73.3.
    pub fn nyc() -> Self {
        Region {
            lat_min: 40.4,
            lat_max: 41.4,
            lon_min: -74.3,
            lon_max: -73.3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.lat_min, self.lat_max, self.lon_min, self.lon_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite || self.lat_min >= self.lat_max || self.lon_min >= self.lon_max {
            return Err(Error::InvalidRegion(format!("{self:?}")));
        }
        if self.lat_min < -90.0
            || self.lat_max > 90.0
            || self.lon_min < -180.0
            || self.lon_max > 180.0
        {
            return Err(Error::InvalidRegion(format!(
                "{self:?} exceeds coordinate range"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        (self.lat_min..=self.lat_max).contains(&lat) && (self.lon_min..=self.lon_max).contains(&lon)
    }
}

/// Reads a venue file: one `id lat lon` record per line, `#` comments.
pub fn load_venues(path: &Path) -> Result<Vec<Venue>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!(
                "expected `id lat lon`, got {} fields",
                fields.len()
            )));
        }
        let id = fields[0]
            .parse::<NodeId>()
            .map_err(|e| parse_err(format!("bad venue id {:?}: {e}", fields[0])))?;
        let lat = fields[1]
            .parse::<f64>()
            .map_err(|e| parse_err(format!("bad latitude {:?}: {e}", fields[1])))?;
        let lon = fields[2]
            .parse::<f64>()
            .map_err(|e| parse_err(format!("bad longitude {:?}: {e}", fields[2])))?;
        let v = Venue { id, lat, lon };
        if !v.is_valid() {
            return Err(parse_err(format!(
                "coordinates ({lat}, {lon}) out of range"
            )));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn write_venues<'a, I>(path: &Path, venues: I) -> Result<()>
where
    I: IntoIterator<Item = &'a Venue>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for v in venues {
        writeln!(w, "{} {} {}", v.id, v.lat, v.lon).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_validation() {
        assert!(Region::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Region::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(Region::new(0.0, f64::NAN, 0.0, 1.0).is_err());
        assert!(Region::new(-91.0, 0.0, 0.0, 1.0).is_err());
        assert!(Region::new(0.0, 1.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn nyc_bounds_inclusive() {
        let r = Region::nyc();
        assert!(r.contains(40.7, -74.0));
        assert!(!r.contains(42.0, -74.0));
        assert!(r.contains(40.4, -74.0));
        assert!(r.contains(41.4, -73.3));
    }

    #[test]
    fn venue_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("venues.txt");
        let vs = vec![
            Venue {
                id: 0,
                lat: 40.5,
                lon: -74.0,
            },
            Venue {
                id: 7,
                lat: 41.25,
                lon: -73.5,
            },
        ];
        write_venues(&path, &vs).unwrap();
        assert_eq!(load_venues(&path).unwrap(), vs);
    }

    #[test]
    fn venue_file_errors_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("venues.txt");
        std::fs::write(&path, "# header\n0 40.5 -74.0\n1 north -74.0\n").unwrap();
        match load_venues(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
