//! Byte offset to (line, column) conversion.
//!
//! Lines are 1-based and split on every ECMAScript line terminator
//! (LF, CR, CRLF, U+2028, U+2029). Columns are 0-based UTF-16 code units,
//! the unit JavaScript tooling reports.

use super::ast::Span;

pub struct LineIndex<'a> {
    text: &'a str,
    line_starts: Vec<usize>,
    ascii_lines: Vec<bool>,
}

impl<'a> LineIndex<'a> {
    pub fn new(text: &'a str) -> Self {
        let bytes = text.as_bytes();
        let mut line_starts = vec![0];
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'\n' => line_starts.push(i + 1),
                b'\r' => {
                    if bytes.get(i + 1) == Some(&b'\n') {
                        i += 1;
                    }
                    line_starts.push(i + 1);
                }
                // U+2028 / U+2029 encode as E2 80 A8 / E2 80 A9
                0xE2 if bytes.get(i + 1) == Some(&0x80)
                    && matches!(bytes.get(i + 2), Some(0xA8) | Some(0xA9)) =>
                {
                    i += 2;
                    line_starts.push(i + 1);
                }
                _ => {}
            }
            i += 1;
        }
        let ascii_lines = line_starts
            .iter()
            .enumerate()
            .map(|(n, &start)| {
                let end = line_starts.get(n + 1).copied().unwrap_or(bytes.len());
                bytes[start..end].is_ascii()
            })
            .collect();
        Self { text, line_starts, ascii_lines }
    }

    /// `(line, column)` of a byte offset. Offsets past the end clamp to the end.
    pub fn position(&self, offset: usize) -> (u32, u32) {
        let offset = offset.min(self.text.len());
        let line = match self.line_starts.binary_search(&offset) {
            Ok(exact) => exact,
            Err(next) => next - 1,
        };
        let start = self.line_starts[line];
        let col = if self.ascii_lines[line] {
            offset - start
        } else {
            let mut end = offset;
            while !self.text.is_char_boundary(end) {
                end -= 1;
            }
            self.text[start..end].encode_utf16().count()
        };
        (line as u32 + 1, col as u32)
    }

    pub fn span(&self, start: u32, end: u32) -> Span {
        let (start_line, start_col) = self.position(start as usize);
        let (end_line, end_col) = self.position(end as usize);
        Span { start_line, start_col, end_line, end_col }
    }
}
