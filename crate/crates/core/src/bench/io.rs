use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Reads one `0`/`1` line per shot. With `width` given, every line must have
/// exactly that many characters.
pub fn read_syndromes<R: BufRead>(reader: R, width: Option<usize>) -> Result<Vec<BitVector>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let mut bits = Vec::with_capacity(line.len());
        for c in line.bytes() {
            match c {
                b'0' => bits.push(0),
                b'1' => bits.push(1),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("unexpected character {:?}", c as char),
                    })
                }
            }
        }
        if let Some(w) = width {
            if bits.len() != w {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected {w} bits, found {}", bits.len()),
                });
            }
        }
        out.push(BitVector::from_bits(&bits));
    }
    Ok(out)
}

/// Writes one line per prediction.
pub fn write_predictions<W: Write>(mut writer: W, predictions: &[BitVector]) -> Result<()> {
    for p in predictions {
        writeln!(writer, "{p}")?;
    }
    writer.flush()?;
    Ok(())
}
