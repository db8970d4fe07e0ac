//! Word lists as typed on the command line or stored in subgroup files.
//!
//! On top of the library syntax, `x^k` repeats a letter and `(...)^k` a
//! group; a negative `k` inverts. `a^3bA^-2` is `aaabAA`.

use provar::{Alphabet, Error, Letter, Result, Word};

pub fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word> {
    let text = text.trim();
    if !text.contains('^') && !text.contains('(') {
        return alphabet.parse(text);
    }
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let w = sequence(alphabet, &chars, &mut pos)?;
    if pos != chars.len() {
        return Err(Error::InvalidParameter(format!("unbalanced ')' in {text:?}")));
    }
    Ok(w)
}

/// Comma-separated words; an empty list is the trivial subgroup.
pub fn parse_list(alphabet: &Alphabet, text: &str) -> Result<Vec<Word>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(text).into_iter().map(|w| parse_word(alphabet, w)).collect()
}

/// One subgroup per non-empty line; `#` starts a comment.
pub fn parse_file(alphabet: &Alphabet, contents: &str) -> Result<Vec<Vec<Word>>> {
    contents
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_list(alphabet, l))
        .collect()
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

fn sequence(alphabet: &Alphabet, chars: &[char], pos: &mut usize) -> Result<Word> {
    let mut w = Word::identity();
    while *pos < chars.len() && chars[*pos] != ')' {
        if chars[*pos] == '.' {
            *pos += 1;
            continue;
        }
        let atom = if chars[*pos] == '(' {
            *pos += 1;
            let inner = sequence(alphabet, chars, pos)?;
            if chars.get(*pos) != Some(&')') {
                return Err(Error::InvalidParameter("missing ')'".into()));
            }
            *pos += 1;
            inner
        } else {
            letter(alphabet, chars, pos)?
        };
        let atom = if chars.get(*pos) == Some(&'^') {
            *pos += 1;
            atom.pow(exponent(chars, pos)?)
        } else {
            atom
        };
        w = &w * &atom;
    }
    Ok(w)
}

fn letter(alphabet: &Alphabet, chars: &[char], pos: &mut usize) -> Result<Word> {
    let start = *pos;
    *pos += 1;
    if !alphabet.is_compact() {
        while *pos < chars.len() && chars[*pos].is_ascii_alphanumeric() {
            *pos += 1;
        }
    }
    let token: String = chars[start..*pos].iter().collect();
    let w = alphabet.parse(&token)?;
    if w.len() != 1 {
        return Err(Error::UnknownSymbol(token));
    }
    let l: Letter = w.letters()[0];
    Ok(Word::from_letters([l]))
}

fn exponent(chars: &[char], pos: &mut usize) -> Result<i64> {
    let start = *pos;
    if chars.get(*pos) == Some(&'-') {
        *pos += 1;
    }
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let s: String = chars[start..*pos].iter().collect();
    s.parse().map_err(|_| Error::InvalidParameter(format!("bad exponent {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::letters(2).unwrap()
    }

    #[test]
    fn powers_expand() {
        let a = ab();
        assert_eq!(parse_word(&a, "a^3bA^-2").unwrap(), a.parse("aaabaa").unwrap());
        assert_eq!(parse_word(&a, "(ab)^2").unwrap(), a.parse("abab").unwrap());
        assert_eq!(parse_word(&a, "(ab)^-1").unwrap(), a.parse("BA").unwrap());
        assert_eq!(parse_word(&a, "a^0b").unwrap(), a.parse("b").unwrap());
        assert!(parse_word(&a, "(ab").is_err());
        assert!(parse_word(&a, "a^").is_err());
        assert!(parse_word(&a, "c^2").is_err());
    }

    #[test]
    fn lists_and_files() {
        let a = ab();
        assert_eq!(parse_list(&a, "a^2,(ab)^2").unwrap().len(), 2);
        assert!(parse_list(&a, " ").unwrap().is_empty());
        let subgroups = parse_file(&a, "# header\nbaB,bbA\n\naa # squares\n").unwrap();
        assert_eq!(subgroups.len(), 2);
        assert_eq!(subgroups[1], vec![a.parse("aa").unwrap()]);
    }

    #[test]
    fn indexed_alphabets() {
        let a = Alphabet::new(["x1", "x2"]).unwrap();
        assert_eq!(parse_word(&a, "x1^2.X2").unwrap(), a.parse("x1.x1.X2").unwrap());
    }
}
