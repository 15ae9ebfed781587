use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn trajkit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trajkit"))
}

#[test]
fn pci_writes_csv_to_stdout() {
    let out = trajkit()
        .arg("pci")
        .arg(fixture("track.csv"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("window_start_ms,pci_m"));
    // 60 s track, 14 s windows every 2 s
    assert_eq!(lines.count(), 24);
}

#[test]
fn eval_needs_a_prediction_source() {
    let out = trajkit()
        .args(["eval", "--session"])
        .arg(fixture("session.json"))
        .output()
        .unwrap();
    assert!(!out.status.success());

    let out = trajkit()
        .args(["eval", "--baseline", "stationary", "--session"])
        .arg(fixture("session.json"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["overall"]["count"], 24);
    assert!(String::from_utf8_lossy(&out.stderr).contains("stationary"));
}

#[test]
fn bad_markers_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let markers = dir.path().join("m.json");
    std::fs::write(
        &markers,
        r#"[{"timestamp_ms": 5000, "x": 0, "y": 0}, {"timestamp_ms": 1000, "x": 1, "y": 1}]"#,
    )
    .unwrap();
    let out = trajkit()
        .arg("correct")
        .arg(fixture("track.csv"))
        .arg("--markers")
        .arg(&markers)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not after"));
}

#[test]
fn serve_reads_port_from_env() {
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(
        fixture("session.json"),
        dir.path().join("fixture-drive.json"),
    )
    .unwrap();
    let mut child = trajkit()
        .args(["serve", "--data-dir"])
        .arg(dir.path())
        .env("TRAJKIT_PORT", port.to_string())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();

    let deadline = Instant::now() + Duration::from_secs(10);
    let body = loop {
        if let Ok(mut s) = TcpStream::connect(("127.0.0.1", port)) {
            s.write_all(b"GET /sessions HTTP/1.1\r\nhost: localhost\r\nconnection: close\r\n\r\n")
                .unwrap();
            let mut buf = String::new();
            s.read_to_string(&mut buf).unwrap();
            break buf;
        }
        assert!(Instant::now() < deadline, "server did not start");
        std::thread::sleep(Duration::from_millis(50));
    };
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(body.starts_with("HTTP/1.1 200"), "{body}");
    assert!(body.contains("\"session_id\":\"fixture-drive\""));
}
