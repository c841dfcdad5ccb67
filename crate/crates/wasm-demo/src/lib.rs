//! Browser bindings: each export takes the text of a spec and returns a
//! JSON report, or `{"error": ...}`.

use openbook_core::dsl::parse_spec;
use openbook_core::report::{run_command, to_json, Command, Flags};
use wasm_bindgen::prelude::*;

fn run(text: &str, cmd: Command, word: Option<String>) -> String {
    let flags = Flags { word, ..Flags::default() };
    let out = parse_spec(text).and_then(|spec| run_command(&cmd, &spec, &flags));
    match out {
        Ok(o) => match o.report {
            Some(r) => to_json(&r),
            None => o.body,
        },
        Err(e) => serde_json::json!({ "error": e.to_string() }).to_string(),
    }
}

/// Hat Floer rank over GF(2) of the open book with monodromy `word`.
#[wasm_bindgen]
pub fn homology(spec: &str, word: &str) -> String {
    run(spec, Command::Homology, Some(word.to_string()))
}

/// Whether the contact class of `word` vanishes over GF(2).
#[wasm_bindgen]
pub fn contact(spec: &str, word: &str) -> String {
    run(spec, Command::Contact, Some(word.to_string()))
}

/// Naturality certificate for the pair `(g, h)`.
#[wasm_bindgen]
pub fn comult(spec: &str, g: &str, h: &str) -> String {
    run(spec, Command::Comult { g: g.to_string(), h: h.to_string() }, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = "page 0 2; word pos = t(core)^1; word neg = t(core)^-1;";

    #[test]
    fn exports_return_json() {
        let v: serde_json::Value = serde_json::from_str(&contact(SPEC, "neg")).unwrap();
        assert_eq!(v["contact_nonzero"], false);
        let v: serde_json::Value = serde_json::from_str(&homology(SPEC, "pos")).unwrap();
        assert_eq!(v["homology"]["rank"], 1);
        let v: serde_json::Value = serde_json::from_str(&comult(SPEC, "pos", "pos")).unwrap();
        assert_eq!(v["verdict"], "certificate OK");
        let v: serde_json::Value = serde_json::from_str(&contact("page 0 1;", "g")).unwrap();
        assert!(v["error"].as_str().unwrap().contains("degenerate"));
    }
}
