//! Binary vector file format, little-endian and bit-exact:
//!
//! ```text
//! header : magic "SVEC" | version u32 | dimension u32 | count u64
//! record : key_len u32 | key bytes (UTF-8, "language\ttitle\tindex") | dimension × f32
//! ```
//!
//! The optional sidecar offset table makes the main file seekable without
//! loading it:
//!
//! ```text
//! header : magic "SVIX" | version u32 | count u64
//! entry  : key_len u32 | key bytes | record_offset u64
//! ```

use std::collections::HashMap;
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::sync::Mutex;

use super::EmbedError;

pub const VECTOR_FILE_MAGIC: [u8; 4] = *b"SVEC";
pub const SIDECAR_MAGIC: [u8; 4] = *b"SVIX";
pub const VECTOR_FILE_VERSION: u32 = 1;

/// Incremental writer; also records the offsets a sidecar needs.
pub struct VectorFileWriter<W: Write> {
    sink: W,
    dimension: usize,
    expected: u64,
    written: u64,
    position: u64,
    offsets: Vec<(String, u64)>,
}

impl<W: Write> VectorFileWriter<W> {
    pub fn new(mut sink: W, dimension: usize, count: u64) -> Result<Self, EmbedError> {
        sink.write_all(&VECTOR_FILE_MAGIC)?;
        sink.write_all(&VECTOR_FILE_VERSION.to_le_bytes())?;
        sink.write_all(&(dimension as u32).to_le_bytes())?;
        sink.write_all(&count.to_le_bytes())?;
        Ok(VectorFileWriter {
            sink,
            dimension,
            expected: count,
            written: 0,
            position: 20,
            offsets: Vec::new(),
        })
    }

    pub fn write_record(&mut self, key: &str, values: &[f32]) -> Result<(), EmbedError> {
        if values.len() != self.dimension {
            return Err(EmbedError::DimensionMismatch {
                expected: self.dimension,
                actual: values.len(),
            });
        }
        if self.written == self.expected {
            return Err(EmbedError::Format(format!(
                "more records than the declared count {}",
                self.expected
            )));
        }
        self.offsets.push((key.to_string(), self.position));
        let key_bytes = key.as_bytes();
        self.sink.write_all(&(key_bytes.len() as u32).to_le_bytes())?;
        self.sink.write_all(key_bytes)?;
        for v in values {
            self.sink.write_all(&v.to_le_bytes())?;
        }
        self.position += 4 + key_bytes.len() as u64 + 4 * self.dimension as u64;
        self.written += 1;
        Ok(())
    }

    /// Checks the declared count was met and hands back the sink plus the
    /// `(key, offset)` list for [`write_sidecar`].
    pub fn finish(mut self) -> Result<(W, Vec<(String, u64)>), EmbedError> {
        if self.written != self.expected {
            return Err(EmbedError::Format(format!(
                "wrote {} records but declared {}",
                self.written, self.expected
            )));
        }
        self.sink.flush()?;
        Ok((self.sink, self.offsets))
    }
}

/// Writes a whole vector file in one call.
pub fn write_vector_file<W: Write>(
    sink: W,
    dimension: usize,
    records: &[(String, Vec<f32>)],
) -> Result<Vec<(String, u64)>, EmbedError> {
    let mut writer = VectorFileWriter::new(sink, dimension, records.len() as u64)?;
    for (key, values) in records {
        writer.write_record(key, values)?;
    }
    let (_, offsets) = writer.finish()?;
    Ok(offsets)
}

fn read_exact_or<R: Read>(reader: &mut R, buf: &mut [u8], what: &str) -> Result<(), EmbedError> {
    reader
        .read_exact(buf)
        .map_err(|e| EmbedError::Format(format!("truncated {what}: {e}")))
}

fn read_u32<R: Read>(reader: &mut R, what: &str) -> Result<u32, EmbedError> {
    let mut buf = [0u8; 4];
    read_exact_or(reader, &mut buf, what)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(reader: &mut R, what: &str) -> Result<u64, EmbedError> {
    let mut buf = [0u8; 8];
    read_exact_or(reader, &mut buf, what)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_key<R: Read>(reader: &mut R) -> Result<String, EmbedError> {
    let len = read_u32(reader, "key length")? as usize;
    if len > 1 << 20 {
        return Err(EmbedError::Format(format!("implausible key length {len}")));
    }
    let mut key = vec![0u8; len];
    read_exact_or(reader, &mut key, "key")?;
    String::from_utf8(key).map_err(|_| EmbedError::Format("key is not UTF-8".into()))
}

fn read_header<R: Read>(reader: &mut R) -> Result<(usize, u64), EmbedError> {
    let mut magic = [0u8; 4];
    read_exact_or(reader, &mut magic, "header")?;
    if magic != VECTOR_FILE_MAGIC {
        return Err(EmbedError::Format(format!(
            "bad magic {magic:?}, not a vector file"
        )));
    }
    let version = read_u32(reader, "version")?;
    if version != VECTOR_FILE_VERSION {
        return Err(EmbedError::Format(format!("unsupported version {version}")));
    }
    let dimension = read_u32(reader, "dimension")? as usize;
    if dimension < 2 {
        return Err(EmbedError::Format(format!("bad dimension {dimension}")));
    }
    let count = read_u64(reader, "count")?;
    Ok((dimension, count))
}

fn read_values<R: Read>(reader: &mut R, dimension: usize) -> Result<Vec<f32>, EmbedError> {
    let mut raw = vec![0u8; dimension * 4];
    read_exact_or(reader, &mut raw, "vector values")?;
    Ok(raw
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

/// Reads an entire vector file: `(dimension, records)`.
pub fn read_vector_file<R: Read>(
    mut reader: R,
) -> Result<(usize, Vec<(String, Vec<f32>)>), EmbedError> {
    let (dimension, count) = read_header(&mut reader)?;
    let mut records = Vec::with_capacity(count.min(1 << 20) as usize);
    for _ in 0..count {
        let key = read_key(&mut reader)?;
        let values = read_values(&mut reader, dimension)?;
        records.push((key, values));
    }
    let mut probe = [0u8; 1];
    if reader.read(&mut probe).unwrap_or(0) != 0 {
        return Err(EmbedError::Format(
            "trailing bytes after the declared record count".into(),
        ));
    }
    Ok((dimension, records))
}

/// Writes a sidecar offset table for a vector file.
pub fn write_sidecar<W: Write>(
    mut sink: W,
    offsets: &[(String, u64)],
) -> Result<(), EmbedError> {
    sink.write_all(&SIDECAR_MAGIC)?;
    sink.write_all(&VECTOR_FILE_VERSION.to_le_bytes())?;
    sink.write_all(&(offsets.len() as u64).to_le_bytes())?;
    for (key, offset) in offsets {
        let key_bytes = key.as_bytes();
        sink.write_all(&(key_bytes.len() as u32).to_le_bytes())?;
        sink.write_all(key_bytes)?;
        sink.write_all(&offset.to_le_bytes())?;
    }
    sink.flush()?;
    Ok(())
}

pub fn read_sidecar<R: Read>(mut reader: R) -> Result<Vec<(String, u64)>, EmbedError> {
    let mut magic = [0u8; 4];
    read_exact_or(&mut reader, &mut magic, "sidecar header")?;
    if magic != SIDECAR_MAGIC {
        return Err(EmbedError::Format(format!(
            "bad magic {magic:?}, not a sidecar offset table"
        )));
    }
    let version = read_u32(&mut reader, "sidecar version")?;
    if version != VECTOR_FILE_VERSION {
        return Err(EmbedError::Format(format!("unsupported version {version}")));
    }
    let count = read_u64(&mut reader, "sidecar count")?;
    let mut offsets = Vec::with_capacity(count.min(1 << 20) as usize);
    for _ in 0..count {
        let key = read_key(&mut reader)?;
        let offset = read_u64(&mut reader, "offset")?;
        offsets.push((key, offset));
    }
    Ok(offsets)
}

/// Random access into a vector file through its sidecar, without loading the
/// records. Lookups are thread-safe (the underlying file handle is shared
/// behind a lock).
pub struct SeekableVectorFile {
    file: Mutex<std::fs::File>,
    dimension: usize,
    index: HashMap<String, u64>,
}

impl SeekableVectorFile {
    pub fn open(vector_path: &Path, sidecar_path: &Path) -> Result<Self, EmbedError> {
        let mut file = std::fs::File::open(vector_path)?;
        let (dimension, _count) = read_header(&mut file)?;
        let sidecar = std::fs::File::open(sidecar_path)?;
        let offsets = read_sidecar(std::io::BufReader::new(sidecar))?;
        Ok(SeekableVectorFile {
            file: Mutex::new(file),
            dimension,
            index: offsets.into_iter().collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn contains(&self, key: &str) -> bool {
        self.index.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Result<Option<Vec<f32>>, EmbedError> {
        let Some(&offset) = self.index.get(key) else {
            return Ok(None);
        };
        let mut file = self.file.lock().expect("vector file lock");
        file.seek(SeekFrom::Start(offset))?;
        let stored_key = read_key(&mut *file)?;
        if stored_key != key {
            return Err(EmbedError::Format(format!(
                "sidecar offset for {key:?} points at record {stored_key:?}"
            )));
        }
        Ok(Some(read_values(&mut *file, self.dimension)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn sample_records() -> Vec<(String, Vec<f32>)> {
        vec![
            ("en\tA\t0".to_string(), vec![1.0, 0.0, 0.0]),
            ("en\tA\t1".to_string(), vec![0.0, 1.0, 0.0]),
            ("es\tÁrbol\t0".to_string(), vec![0.0, 0.0, -1.5]),
        ]
    }

    #[test]
    fn file_round_trip_is_bit_exact() {
        let records = sample_records();
        let mut bytes = Vec::new();
        write_vector_file(&mut bytes, 3, &records).unwrap();
        // header spot checks: magic, version, dimension, count
        assert_eq!(&bytes[0..4], b"SVEC");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 3);
        assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 3);
        let (dimension, back) = read_vector_file(Cursor::new(&bytes)).unwrap();
        assert_eq!(dimension, 3);
        assert_eq!(back, records);
    }

    #[test]
    fn truncated_file_is_rejected() {
        let mut bytes = Vec::new();
        write_vector_file(&mut bytes, 3, &sample_records()).unwrap();
        bytes.truncate(bytes.len() - 2);
        assert!(matches!(
            read_vector_file(Cursor::new(&bytes)),
            Err(EmbedError::Format(_))
        ));
    }

    #[test]
    fn count_must_match() {
        let mut writer = VectorFileWriter::new(Vec::new(), 3, 2).unwrap();
        writer.write_record("a", &[0.0, 0.0, 1.0]).unwrap();
        assert!(writer.finish().is_err());
    }

    #[test]
    fn sidecar_round_trip_and_seek() {
        let records = sample_records();
        let dir = tempfile::tempdir().unwrap();
        let vec_path = dir.path().join("v.bin");
        let idx_path = dir.path().join("v.idx");
        let offsets = write_vector_file(
            std::io::BufWriter::new(std::fs::File::create(&vec_path).unwrap()),
            3,
            &records,
        )
        .unwrap();
        write_sidecar(
            std::io::BufWriter::new(std::fs::File::create(&idx_path).unwrap()),
            &offsets,
        )
        .unwrap();
        let seekable = SeekableVectorFile::open(&vec_path, &idx_path).unwrap();
        assert_eq!(seekable.dimension(), 3);
        assert_eq!(
            seekable.get("es\tÁrbol\t0").unwrap(),
            Some(vec![0.0, 0.0, -1.5])
        );
        assert_eq!(seekable.get("missing").unwrap(), None);
    }
}
