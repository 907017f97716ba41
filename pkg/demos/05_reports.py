"""Run the built-in scenarios and write a JSON report."""
import sys

from lgdiv.verify import Config, dumps, report_document, run_all

cfg = Config(height=1000, spot_checks=100)
reports, code = run_all(cfg)
for r in reports:
    print(r.summary())

out = sys.argv[1] if len(sys.argv) > 1 else "report.json"
with open(out, "w") as fh:
    fh.write(dumps(report_document(reports, cfg, canonical=True)))
print("wrote", out, "exit code", code)
