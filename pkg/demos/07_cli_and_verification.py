"""The command-line surface and the randomized verification harness.

Tower files (.arl.json) declare groups, homs, modules and towers; the CLI
normalizes, takes limits, evaluates the infinite-index functors and runs the
verification suites.  Reports are deterministic for a fixed seed and can be
replayed against their recorded certificates.
"""

import pathlib
import subprocess
import sys

HERE = pathlib.Path(__file__).parent
SAMPLE = HERE / "data" / "sample.arl.json"


def run(*args):
    cmd = [sys.executable, "-m", "arl", *args]
    print(f"$ arl {' '.join(args)}")
    proc = subprocess.run(cmd, capture_output=True, text=True)
    for line in proc.stdout.splitlines():
        print("  " + line)
    if proc.returncode:
        for line in proc.stderr.splitlines():
            print("  ! " + line)
    print(f"  (exit {proc.returncode})")
    print()
    return proc


run("normalize", "--file", str(SAMPLE), "--tower", "noisy")
run("limit", "--file", str(SAMPLE), "--tower", "zl")
run("upsilon", "--file", str(SAMPLE), "--tower", "noisy", "--h", "h", "--levels", "3")
run("upsilon", "--file", str(SAMPLE), "--tower", "zl", "--h", "5")  # exit 4: finite index

proc = run("verify", "--suite", "phi", "--seed", "7", "--cases", "10")

# Replay: save the report, then re-check every recorded certificate.
report = HERE / "data" / "phi_report.txt"
report.write_text(proc.stdout)
run("verify", "--suite", "phi", "--replay", str(report))
report.unlink()
