//! Sectioned key/value reports with a line-oriented text rendering and a
//! JSON rendering.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<Value>),
}

impl Value {
    pub fn word(w: impl ToString) -> Value {
        Value::Text(w.to_string())
    }

    pub fn ints<T: Into<i64> + Copy>(xs: &[T]) -> Value {
        Value::List(xs.iter().map(|&x| Value::Int(x.into())).collect())
    }

    fn render(&self, out: &mut String) {
        match self {
            Value::Int(v) => out.push_str(&v.to_string()),
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Text(s) => out.push_str(&format!("{s:?}")),
            Value::List(xs) => {
                out.push('[');
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    x.render(out);
                }
                out.push(']');
            }
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Value {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Value {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Value {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Value {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Value {
        Value::Text(v)
    }
}

impl From<Vec<usize>> for Value {
    fn from(v: Vec<usize>) -> Value {
        Value::List(v.into_iter().map(Value::from).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Section {
        Section {
            name: name.into(),
            entries: Vec::new(),
        }
    }

    /// Adds an entry; a repeated key replaces the earlier value in place.
    pub fn set(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Section {
        self.set_noted(key, value, None::<String>)
    }

    pub fn set_noted(
        &mut self,
        key: impl Into<String>,
        value: impl Into<Value>,
        note: Option<impl Into<String>>,
    ) -> &mut Section {
        let key = key.into();
        let entry = Entry {
            key: key.clone(),
            value: value.into(),
            note: note.map(Into::into),
        };
        match self.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => *e = entry,
            None => self.entries.push(entry),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|e| e.key == key).map(|e| &e.value)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.section(section).and_then(|s| s.get(key))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", s.name));
            for e in &s.entries {
                out.push_str(&e.key);
                out.push_str(" = ");
                e.value.render(&mut out);
                if let Some(n) = &e.note {
                    out.push_str("  # ");
                    out.push_str(n);
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering() {
        let mut r = Report::default();
        let mut s = Section::new("tower");
        s.set("index", 4usize)
            .set_noted("degrees", Value::ints(&[4i64, 4]), Some("both meridians"))
            .set("word", Value::word("h x^-1"))
            .set("index", 5usize);
        r.push(s);
        r.push(Section::new("empty"));
        assert_eq!(
            r.to_text(),
            "[tower]\nindex = 5\ndegrees = [4, 4]  # both meridians\nword = \"h x^-1\"\n\n[empty]\n"
        );
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["sections"][0]["entries"][1]["value"], serde_json::json!([4, 4]));
    }
}
