//! Line-oriented `key=value` records, the machine-readable output format.
//! Keys never contain `=`; values never contain newlines; parsing splits
//! on the first `=` so values may carry the character freely.

/// Ordered record writer.
#[derive(Debug, Default)]
pub struct Records {
    entries: Vec<(String, String)>,
}

impl Records {
    pub fn new(command: &str) -> Self {
        let mut records = Self::default();
        records.push("command", command);
        records
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        debug_assert!(!key.contains('=') && !key.contains('\n'));
        debug_assert!(!value.contains('\n'), "record values are single-line");
        self.entries.push((key.to_string(), value));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push('=');
            out.push_str(value);
            out.push('\n');
        }
        out
    }
}

/// Parses rendered records back into ordered pairs. Fails on any line
/// without a `=`. The binary only writes records; reading them back is
/// for tests and downstream tooling.
#[cfg_attr(not(test), allow(dead_code))]
pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    text.lines()
        .filter(|line| !line.is_empty())
        .map(|line| {
            line.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| format!("record line without '=': {line:?}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut records = Records::new("demo");
        records.push("value", 0.125);
        records.push("note", "a = b holds");
        let text = records.render();
        let parsed = parse(&text).unwrap();
        assert_eq!(parsed[0], ("command".into(), "demo".into()));
        assert_eq!(parsed[2], ("note".into(), "a = b holds".into()));
        let mut again = Records::default();
        for (k, v) in &parsed {
            again.push(k, v);
        }
        assert_eq!(again.render(), text);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse("no separator here\n").is_err());
    }
}
