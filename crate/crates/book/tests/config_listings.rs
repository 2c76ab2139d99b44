use rcldpc::sim::{SimConfig, Simulation};

const CHAPTER: &str = include_str!("../../../book/src/simulation.md");

fn toml_blocks() -> Vec<String> {
    let mut out = Vec::new();
    let mut cur: Option<String> = None;
    for line in CHAPTER.lines() {
        match (&mut cur, line.trim()) {
            (None, "```toml") => cur = Some(String::new()),
            (Some(_), "```") => out.push(cur.take().unwrap()),
            (Some(buf), _) => {
                buf.push_str(line);
                buf.push('\n');
            }
            _ => {}
        }
    }
    out
}

#[test]
fn guide_configs_parse_and_validate() {
    let blocks = toml_blocks();
    assert_eq!(blocks.len(), 2);
    for b in &blocks {
        let cfg = SimConfig::from_toml(b).unwrap_or_else(|e| panic!("{e}\n{b}"));
        Simulation::new(cfg).unwrap();
    }
    let joined = SimConfig::from_toml(&blocks.concat()).unwrap();
    assert!(joined.cpm.is_some());
}
