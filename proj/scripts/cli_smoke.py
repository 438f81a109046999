#!/usr/bin/env python3
"""Starts the snowframe binary with the control API on a free port, drives it
over HTTP, stops it with SIGTERM and checks the exit code and final line.

usage: cli_smoke.py SNOWFRAME_BINARY CONFIG.json
"""
import json
import os
import re
import signal
import subprocess
import sys
import time
import urllib.error
import urllib.request


def fetch(url, method="GET", token=None):
    req = urllib.request.Request(url, method=method, data=b"" if method == "POST" else None)
    if token:
        req.add_header("Authorization", f"Bearer {token}")
    try:
        with urllib.request.urlopen(req, timeout=10) as r:
            return r.status, r.read()
    except urllib.error.HTTPError as e:
        return e.code, e.read()


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok   {what}")


def main(binary, config):
    env = dict(os.environ, SNOWFRAME_CONTROL_TOKEN="smoke")
    proc = subprocess.Popen(
        [binary, "--config", config, "--headless", "--source", "synthetic", "--sink", "null",
         "--control-port", "0", "--seed", "3"],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True, env=env)
    try:
        line = proc.stderr.readline()
        m = re.search(r"http://([\d.]+):(\d+)/health", line)
        check(m is not None, f"control address announced ({line.strip()})")
        base = f"http://{m.group(1)}:{m.group(2)}"

        deadline = time.time() + 20
        while True:
            status, body = fetch(base + "/health")
            health = json.loads(body)
            if health["frames_composed"] > 0 or time.time() > deadline:
                break
            time.sleep(0.05)
        check(status == 200 and health["state"] == "running", "GET /health is running")
        check(fetch(base + "/sleep", "POST")[0] == 401, "POST /sleep without token is 401")
        status, body = fetch(base + "/sleep", "POST", "smoke")
        check(status == 200 and json.loads(body)["state"] == "sleeping", "POST /sleep with token")
        check(json.loads(fetch(base + "/health")[1])["state"] == "sleeping", "health shows sleeping")
        status, body = fetch(base + "/wake", "POST", "smoke")
        check(status == 200 and json.loads(body)["state"] == "running", "POST /wake")
        status, body = fetch(base + "/wake", "POST", "smoke")
        check(json.loads(body)["result"] == "no-op", "second wake is a no-op")
        status, body = fetch(base + "/frame.png")
        check(status == 200 and body[1:4] == b"PNG", "GET /frame.png")
    finally:
        proc.send_signal(signal.SIGTERM)
        out, err = proc.communicate(timeout=30)
    check(proc.returncode == 0, f"SIGTERM gives exit 0 (got {proc.returncode}; {err.strip()})")
    final = json.loads(out.strip().splitlines()[-1])
    check(final["state"] == "shutting_down", "final telemetry line")
    return 0


if __name__ == "__main__":
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        sys.exit(2)
    sys.exit(main(sys.argv[1], sys.argv[2]))
