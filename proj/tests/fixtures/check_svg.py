import pathlib
import sys
import xml.dom.minidom

files = sorted(pathlib.Path(sys.argv[1]).glob("*.svg"))
if not files:
    sys.exit("no SVG files in " + sys.argv[1])
for f in files:
    doc = xml.dom.minidom.parse(str(f))
    root = doc.documentElement
    if root.tagName != "svg" or root.getAttribute("xmlns") != "http://www.w3.org/2000/svg":
        sys.exit(f"{f}: root is not an SVG element")
    if not root.getElementsByTagName("polyline"):
        sys.exit(f"{f}: no data series")
    print(f"ok {f.name}")
