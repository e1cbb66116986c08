use std::process::{Command, Output};

fn davlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_davlab"))
        .args(args)
        .env_remove("DAVLAB_BUDGET_SECONDS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    rd.records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn involutions_listing() {
    let o = davlab(&["involutions", "--n", "12", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,s,n1,n2,split\n12,5,3,4,ok\n12,7,4,3,ok\n");

    let o = davlab(&["involutions", "--n", "7", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,s,n1,n2,split\n");

    let o = davlab(&["involutions", "--n", "24", "--format", "csv"]);
    assert!(stdout(&o).contains("24,11,,,no valid split\n"));
}

#[test]
fn small_table_is_empty() {
    let o = davlab(&["table", "--n-max", "11", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn exact_examples() {
    let get = |w: &str| {
        let o = davlab(&["exact", "--n", if w == "pm1" { "8" } else { "12" }, "--weights", w, "--format", "csv"]);
        assert_eq!(o.status.code(), Some(0), "{w}");
        csv_rows(&o)[0][3].parse::<u64>().unwrap()
    };
    assert_eq!(get("pm1"), 4);
    assert_eq!(get("range:3"), 4);
    assert!((5..=8).contains(&get("onestwo:5")));
}

#[test]
fn exact_witness_rows() {
    let o = davlab(&["exact", "--n", "4", "--weights", "pm1", "--witnesses", "--format", "csv"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][3], "3");
    assert_eq!(rows[0][7], "(1 2)");
}

#[test]
fn table_with_exact_values_stays_in_bounds() {
    let o = davlab(&["table", "--n-max", "21", "--exact", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 8);
    for r in rows {
        let v: Vec<u64> = r.iter().map(|c| c.parse().unwrap()).collect();
        assert!(v[4] <= v[5] && v[5] <= v[6], "{r:?}");
    }
}

#[test]
fn classify_examples() {
    let o = davlab(&["classify", "--n", "3", "--s", "2", "--length", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    let claimed = rows.iter().filter(|r| r[3] == "claimed").count();
    let other: Vec<&Vec<String>> = rows.iter().filter(|r| r[3] == "other").collect();
    assert_eq!(claimed, 3);
    assert_eq!(other.len(), 1);
    assert_eq!(other[0][4], "xy^0 xy^1 xy^2");

    let o = davlab(&["classify", "--n", "5", "--s", "4", "--format", "csv"]);
    assert!(csv_rows(&o).iter().all(|r| r[3] == "claimed"));
    let human = stdout(&davlab(&["classify", "--n", "5", "--s", "4"]));
    assert!(human.contains("y -> y^u"));
}

#[test]
fn json_and_csv_agree() {
    let args = ["classify", "--n", "4", "--s", "3"];
    let csv_out = davlab(&[&args[..], &["--format", "csv"]].concat());
    let json_out = davlab(&[&args[..], &["--format", "json"]].concat());
    let v: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    let text = stdout(&csv_out);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
    let objs = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), objs.len());
    for (r, obj) in rows.iter().zip(objs) {
        for (h, cell) in header.iter().zip(r.iter()) {
            let j = match &obj[h.as_str()] {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => String::new(),
                other => other.to_string(),
            };
            assert_eq!(j, cell);
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(davlab(&["involutions"]).status.code(), Some(2));
    assert_eq!(davlab(&["exact", "--n", "12", "--weights", "onestwo:4"]).status.code(), Some(2));
    assert_eq!(davlab(&["classify", "--n", "12", "--s", "4"]).status.code(), Some(2));
    assert_eq!(davlab(&["table", "--threads", "0"]).status.code(), Some(2));

    let o = davlab(&["exact", "--n", "30", "--weights", "one", "--max-nodes", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(3));
    let rows = csv_rows(&o);
    assert!(rows[0][3].starts_with('≥'));
    assert_eq!(rows[0][4], "false");

    let o = davlab(&["small-davenport", "--n", "12", "--s", "5", "--max-nodes", "5"]);
    assert_eq!(o.status.code(), Some(3));
    let o = davlab(&["classify", "--n", "12", "--s", "5", "--max-nodes", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(csv_rows(&o).iter().all(|r| r[6] == "true"));
}

#[test]
fn budget_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_davlab"))
        .args(["exact", "--n", "30", "--weights", "one"])
        .env("DAVLAB_BUDGET_SECONDS", "0.000000001")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn qr_warns_off_squarefree() {
    let o = davlab(&["exact", "--n", "12", "--weights", "qr"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stderr).unwrap().contains("not squarefree"));
    let o = davlab(&["exact", "--n", "15", "--weights", "qr"]);
    assert!(o.stderr.is_empty());
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let p = path.to_str().unwrap();
    let o = davlab(&["table", "--format", "csv", "--output", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,s,n1,n2,lower,exact,upper\n12,5,3,4,5,,8\n"));
    assert_eq!(text.lines().count(), 15);
}

#[test]
fn witness_and_multidim() {
    let o = davlab(&["witness", "--n", "21", "--s", "13", "--format", "csv"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[6] == "true"));
    let o = davlab(&["multidim", "--n", "12", "--s", "5", "--k", "2", "--format", "csv"]);
    assert_eq!(csv_rows(&o)[0], ["12", "5", "2", "3", "4", "6", "9", "", "16"]);
}
