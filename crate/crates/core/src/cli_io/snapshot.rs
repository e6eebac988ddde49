//! Binary snapshots of a distribution function.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! offset  size       field
//!      0     8       magic "VLSVSNAP"
//!      8     4       version (u32) = 1
//!     12     8       nx (u64)
//!     20     8       nv (u64)
//!     28     8       L (f64)
//!     36     8       vmax (f64)
//!     44     8       time (f64)
//!     52     8*nx*nv payload (f64), row-major with x as the slow index
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{DistributionField, GridSpec};

pub const MAGIC: &[u8; 8] = b"VLSVSNAP";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 52;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotHeader {
    pub version: u32,
    pub nx: u64,
    pub nv: u64,
    pub length: f64,
    pub vmax: f64,
    pub time: f64,
}

impl SnapshotHeader {
    pub fn payload_len(&self) -> Result<usize> {
        usize::try_from(self.nx)
            .ok()
            .zip(usize::try_from(self.nv).ok())
            .and_then(|(nx, nv)| nx.checked_mul(nv))
            .ok_or_else(|| Error::Format(format!("grid {}x{} is too large", self.nx, self.nv)))
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.length, self.vmax, self.nx as usize, self.nv as usize)
            .map_err(|e| Error::Format(format!("header describes an invalid grid: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub field: DistributionField,
}

pub fn write_snapshot(mut out: impl Write, f: &DistributionField, time: f64) -> std::io::Result<()> {
    let spec = f.spec();
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(spec.nx() as u64).to_le_bytes())?;
    out.write_all(&(spec.nv() as u64).to_le_bytes())?;
    for value in [spec.length(), spec.vmax(), time] {
        out.write_all(&value.to_le_bytes())?;
    }
    for value in f.values() {
        out.write_all(&value.to_le_bytes())?;
    }
    out.flush()
}

fn read_exact_or_format(input: &mut impl Read, buf: &mut [u8], what: &str) -> Result<()> {
    input.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format(format!("truncated snapshot while reading the {what}")),
        _ => Error::Format(format!("cannot read the {what}: {e}")),
    })
}

pub fn read_header(input: &mut impl Read) -> Result<SnapshotHeader> {
    let mut buf = [0u8; HEADER_LEN];
    read_exact_or_format(input, &mut buf, "header")?;
    if &buf[0..8] != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}",
            String::from_utf8_lossy(&buf[0..8])
        )));
    }
    let u32_at = |o: usize| u32::from_le_bytes(buf[o..o + 4].try_into().unwrap());
    let u64_at = |o: usize| u64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
    let version = u32_at(8);
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version}, expected {VERSION}"
        )));
    }
    Ok(SnapshotHeader {
        version,
        nx: u64_at(12),
        nv: u64_at(20),
        length: f64_at(28),
        vmax: f64_at(36),
        time: f64_at(44),
    })
}

pub fn read_snapshot(mut input: impl Read) -> Result<Snapshot> {
    let header = read_header(&mut input)?;
    let spec = header.grid()?;
    let n = header.payload_len()?;
    let mut bytes = vec![0u8; n * 8];
    read_exact_or_format(&mut input, &mut bytes, "payload")?;
    let mut probe = [0u8; 1];
    if input.read(&mut probe).map_err(|e| Error::Format(e.to_string()))? != 0 {
        return Err(Error::Format("trailing bytes after the payload".into()));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let field = DistributionField::from_values(spec, values).map_err(|e| Error::Format(e.to_string()))?;
    Ok(Snapshot {
        time: header.time,
        field,
    })
}

pub fn save_snapshot(path: &Path, f: &DistributionField, time: f64) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_snapshot(BufWriter::new(file), f, time).map_err(|e| Error::io(path, e))
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_snapshot(BufReader::new(file))
}

/// Load a snapshot and require it to live on `expected`.
pub fn load_snapshot_on(path: &Path, expected: &GridSpec) -> Result<Snapshot> {
    let snapshot = load_snapshot(path)?;
    let found = snapshot.field.spec();
    let same = found.nx() == expected.nx()
        && found.nv() == expected.nv()
        && found.length().to_bits() == expected.length().to_bits()
        && found.vmax().to_bits() == expected.vmax().to_bits();
    if !same {
        return Err(Error::Dimension(format!(
            "snapshot {} holds a {}x{} grid on L={}, vmax={}; expected {}x{} on L={}, vmax={}",
            path.display(),
            found.nx(),
            found.nv(),
            found.length(),
            found.vmax(),
            expected.nx(),
            expected.nv(),
            expected.length(),
            expected.vmax()
        )));
    }
    Ok(snapshot)
}

pub fn load_header(path: &Path) -> Result<SnapshotHeader> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_header(&mut BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DistributionField {
        let spec = GridSpec::landau(8, 6).unwrap();
        let mut f = DistributionField::from_fn(spec, |x, v| (0.5 * x).cos() * (-v * v).exp())
            .unwrap()
            .into_values();
        f[5] = -1.25e-300;
        f[7] = f64::MIN_POSITIVE / 4.0;
        DistributionField::from_values(spec, f).unwrap()
    }

    fn encode(f: &DistributionField, time: f64) -> Vec<u8> {
        let mut bytes = Vec::new();
        write_snapshot(&mut bytes, f, time).unwrap();
        bytes
    }

    #[test]
    fn layout_matches_documentation() {
        let f = sample();
        let bytes = encode(&f, 0.75);
        assert_eq!(bytes.len(), HEADER_LEN + 8 * 48);
        assert_eq!(&bytes[0..8], b"VLSVSNAP");
        assert_eq!(&bytes[8..12], &[1, 0, 0, 0]);
        assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 8);
        assert_eq!(u64::from_le_bytes(bytes[20..28].try_into().unwrap()), 6);
        assert_eq!(f64::from_le_bytes(bytes[44..52].try_into().unwrap()), 0.75);
        // x is the slow index: the second stored value is f(x_0, v_1).
        assert_eq!(f64::from_le_bytes(bytes[60..68].try_into().unwrap()), f.get(0, 1));
    }

    #[test]
    fn round_trip_is_bitwise() {
        let f = sample();
        let back = read_snapshot(encode(&f, 1.0).as_slice()).unwrap();
        assert_eq!(back.time, 1.0);
        assert_eq!(back.field.spec(), f.spec());
        for (a, b) in back.field.values().iter().zip(f.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn corrupted_magic_is_format_error() {
        let mut bytes = encode(&sample(), 0.0);
        bytes[0] = b'X';
        assert!(matches!(read_snapshot(bytes.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn wrong_version_is_format_error() {
        let mut bytes = encode(&sample(), 0.0);
        bytes[8] = 2;
        assert!(matches!(read_snapshot(bytes.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn truncation_is_format_error() {
        let bytes = encode(&sample(), 0.0);
        for cut in [0, 7, 30, HEADER_LEN, bytes.len() - 1] {
            assert!(
                matches!(read_snapshot(&bytes[..cut]), Err(Error::Format(_))),
                "cut {cut}"
            );
        }
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(read_snapshot(long.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn grid_mismatch_is_dimension_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.snap");
        save_snapshot(&path, &sample(), 0.5).unwrap();
        assert!(load_snapshot_on(&path, &GridSpec::landau(8, 6).unwrap()).is_ok());
        let other = GridSpec::landau(8, 7).unwrap();
        assert!(matches!(load_snapshot_on(&path, &other), Err(Error::Dimension(_))));
        assert_eq!(load_header(&path).unwrap().time, 0.5);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_snapshot(Path::new("/nonexistent/f.snap")),
            Err(Error::Io { .. })
        ));
    }
}
