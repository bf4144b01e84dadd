//! Cursor for the textual canonical encodings.

use crate::error::{Error, Result};
use crate::posets::MarkSet;

pub(crate) struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, bytes: src.as_bytes(), pos: 0 }
    }

    pub fn error(&self, reason: impl Into<String>) -> Error {
        Error::Parse { encoding: self.src.to_string(), reason: format!("at byte {}: {}", self.pos, reason.into()) }
    }

    pub fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    pub fn at_digit(&self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    pub fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.at_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.src[start..self.pos].parse().map_err(|_| self.error("number out of range"))
    }

    /// `t1,2,3` (the leading `t` already consumed).
    pub fn uint_list(&mut self) -> Result<Vec<u32>> {
        let mut out = vec![self.uint()?];
        while self.eat(b',') {
            out.push(self.uint()?);
        }
        Ok(out)
    }

    pub fn mark_set(&mut self) -> Result<MarkSet> {
        let marks = self.uint_list()?;
        if marks.iter().any(|&l| l == 0 || l > crate::posets::MAX_MARKS) {
            return Err(self.error("mark out of range"));
        }
        Ok(MarkSet::from_marks(marks))
    }

    pub fn finish(&self) -> Result<()> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }
}

pub(crate) fn write_list(out: &mut String, items: impl IntoIterator<Item = u32>) {
    for (i, l) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&l.to_string());
    }
}
