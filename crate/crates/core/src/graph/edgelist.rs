use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Network, NodeId};
use crate::error::{Error, Result};

/// A parsed edge list together with what was discarded while reading it.
#[derive(Debug, Clone)]
pub struct EdgeListLoad {
    pub network: Network,
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
}

/// Reads whitespace-separated `u v` pairs, one edge per line. Blank lines
/// and lines starting with `#` are skipped; tokens after the first two are
/// ignored. Original ids are remapped to `0..n` in order of first
/// appearance and kept as labels.
pub fn load_edge_list(reader: impl BufRead) -> Result<EdgeListLoad> {
    let mut ids: HashMap<u64, NodeId> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lineno = index + 1;
        let mut tokens = trimmed.split_whitespace();
        let mut endpoint = || -> Result<NodeId> {
            let token = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected two node ids".into(),
            })?;
            let raw: u64 = token.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("`{token}` is not a non-negative integer id"),
            })?;
            Ok(*ids.entry(raw).or_insert_with(|| {
                labels.push(raw);
                labels.len() - 1
            }))
        };
        let u = endpoint()?;
        let v = endpoint()?;
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (network, dropped) = Network::from_edges_lossy(labels.len(), edges)?;
    Ok(EdgeListLoad {
        network: network.with_labels(labels)?,
        duplicates_dropped: dropped.duplicates,
        self_loops_dropped: dropped.self_loops,
    })
}

/// Writes one `u v` line per edge using the network's labels.
pub fn write_edge_list(net: &Network, mut out: impl Write) -> Result<()> {
    for (u, v) in net.edges() {
        writeln!(out, "{} {}", net.label(u), net.label(v))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<EdgeListLoad> {
        load_edge_list(text.as_bytes())
    }

    #[test]
    fn path_of_three() {
        let l = load("0 1\n1 2").unwrap();
        assert_eq!(l.network.node_count(), 3);
        assert_eq!(l.network.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(l.duplicates_dropped, 0);
    }

    #[test]
    fn comments_and_duplicates() {
        let l = load("# c\n5 9\n9 5").unwrap();
        assert_eq!(l.network.node_count(), 2);
        assert_eq!(l.network.edge_count(), 1);
        assert_eq!(l.duplicates_dropped, 1);
        assert_eq!(l.network.labels().unwrap(), &[5, 9]);
    }

    #[test]
    fn self_loops_are_dropped() {
        let l = load("1 1\n1 2\n").unwrap();
        assert_eq!(l.self_loops_dropped, 1);
        assert_eq!(l.network.edge_count(), 1);
    }

    #[test]
    fn malformed_line_reports_its_number() {
        match load("0 1\n\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("7\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(load(""), Err(Error::EmptyInput)));
        assert!(matches!(load("# only a comment\n"), Err(Error::EmptyInput)));
    }

    #[test]
    fn write_then_load_preserves_labels() {
        let l = load("10 20\n20 30\n").unwrap();
        let mut buf = Vec::new();
        write_edge_list(&l.network, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "10 20\n20 30\n");
        assert_eq!(load_edge_list(&buf[..]).unwrap().network, l.network);
    }

    /// Set `HIDESEEK_FACEBOOK_EDGES` to the SNAP `facebook_combined.txt` path
    /// to check the ingest of the real dataset.
    #[test]
    fn snap_facebook_node_count() {
        let Ok(path) = std::env::var("HIDESEEK_FACEBOOK_EDGES") else {
            eprintln!("HIDESEEK_FACEBOOK_EDGES unset; skipping");
            return;
        };
        let file = std::io::BufReader::new(std::fs::File::open(path).unwrap());
        assert_eq!(load_edge_list(file).unwrap().network.node_count(), 4039);
    }
}
