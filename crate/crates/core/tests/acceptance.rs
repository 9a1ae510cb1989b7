use glab_core::checks::{run, summary_line, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for n in CRITERIA {
        let r = run(n);
        println!("{}", summary_line(&r));
        if !r.pass {
            failed.push(r.check_id.clone());
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
