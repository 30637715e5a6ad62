import json
import sys
import os

print(json.dumps(sys.argv), os.getcwd())
