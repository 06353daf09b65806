"""Drive the HTTP service the way the web designer does.

Starts ``gridmixer-service`` as a subprocess, waits for /api/health, asks it
to generate a chip, simulates it with per-edge profiles, and shuts down.
"""

import json
import subprocess
import sys
import time
import urllib.error
import urllib.request

PORT = 8391
BASE = f"http://127.0.0.1:{PORT}"


def post(path, payload):
    request = urllib.request.Request(
        BASE + path, data=json.dumps(payload).encode(),
        headers={"content-type": "application/json"},
    )
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


server = subprocess.Popen(
    [sys.executable, "-m", "gridmixer.service", "--port", str(PORT)],
    stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
)
try:
    for _ in range(100):
        try:
            with urllib.request.urlopen(BASE + "/api/health") as response:
                if json.loads(response.read())["status"] == "ok":
                    break
        except urllib.error.URLError:
            time.sleep(0.1)
    else:
        raise SystemExit("service did not come up")
    print("service is healthy")

    design = post("/api/generate", {"rows": 10, "cols": 10, "seed": 7})
    print(f"generated a {design['rows']}x{design['cols']} design with "
          f"{len(design['horizontalChannels']) + len(design['verticalChannels'])} channels")

    design["includeProfiles"] = True
    result = post("/api/simulate", design)
    for i, outlet in enumerate(result["outlets"]):
        print(f"outlet {i}: {outlet['concentration']:.4f} at {outlet['velocity']:.3f} mm/s")
    print(f"profile trace covers {len(result['edgeProfiles'])} channels")
finally:
    server.terminate()
    server.wait()
