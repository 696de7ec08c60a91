#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures")).join(rel)
}

pub fn read(rel: &str) -> String {
    fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub const DEMO_POLICY: &str = "demo/policies/pmUserToDataObject.xml";

pub fn graphpdp<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_graphpdp"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn squash(xml: &str) -> String {
    xml.lines().map(str::trim).collect()
}

/// A policy directory holding one file with the demo policy, edited by
/// replacing `from` with `to`.
pub fn edited_policy_dir(from: &str, to: &str) -> tempfile::TempDir {
    let text = read(DEMO_POLICY);
    assert!(text.contains(from), "demo policy lacks `{from}`");
    policy_dir(&[("pmUserToDataObject.xml", &text.replacen(from, to, 1))])
}

pub fn policy_dir(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

pub const DEMO_RESPONSE: &str = r#"<Response xmlns="urn:oasis:names:tc:xacml:3.0:core:schema:wd-17">
  <Result>
    <Decision>Permit</Decision>
    <Status>
      <StatusCode Value="urn:oasis:names:tc:xacml:1.0:status:ok"/>
    </Status>
    <PolicyIdentifierList>
      <PolicyIdReference>pmUserToDataObject</PolicyIdReference>
    </PolicyIdentifierList>
  </Result>
</Response>"#;

pub const REFERENCE_QUERY: &str = r#"MATCH p1 = (s:dataObjects{typeCode:"pmUser"})-[e1:
  accessRelations]->(:tasks)-[*..2]-(:dataObjects)
MATCH p2 = ({_key:"1196741133"})-[]-
  ({_key:"1196741778"})-[]-({_key:"1196742142"})
WHERE e1.typeKind="worksOn" OR e1.typeKind=
  "allocates" AND ALL (x IN nodes(p2) WHERE x IN
  nodes(p1)) AND ALL (x IN relationships(p2) WHERE
  x IN relationships(p1))
RETURN p1 IS NOT NULL AS result"#;

/// The reference query with the filter parenthesized and without the
/// `dataObjects` labels that the policy never declares.
pub fn reference_query_adjusted() -> String {
    REFERENCE_QUERY
        .replace("(s:dataObjects{", "(s{")
        .replace("(:dataObjects)", "()")
        .replace("WHERE e1.typeKind", "WHERE (e1.typeKind")
        .replace("\"allocates\" AND", "\"allocates\") AND")
}

/// Request document with one `_key` pin per path element.
pub fn request_xml(keys: &[&str]) -> String {
    let n = keys.len();
    let groups: String = keys
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let (cat, id) = match i {
                0 => (
                    "urn:oasis:names:tc:xacml:1.0:subject-category:access-subject",
                    "urn:oasis:names:tc:xacml:1.0:subject:subject-id",
                ),
                i if i + 1 == n => (
                    "urn:oasis:names:tc:xacml:3.0:attribute-category:resource",
                    "urn:oasis:names:tc:xacml:1.0:resource:resource-id",
                ),
                _ => ("xacml4g:1.0:path-category:vertex", "xacml4g:1.0:path:vertex-id"),
            };
            format!(
                r#"<Attributes Category="{cat}"><Attribute AttributeId="{id}"><AttributeValue>{k}</AttributeValue></Attribute></Attributes>"#
            )
        })
        .collect();
    format!(
        r#"<Request xmlns="urn:oasis:names:tc:xacml:3.0:core:schema:wd-17" xmlns:g="xacml4g:1.0:schema" ReturnPolicyIdList="true"><g:PathAttributes>{groups}</g:PathAttributes></Request>"#
    )
}
