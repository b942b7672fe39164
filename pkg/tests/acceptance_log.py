# criterion number -> (passed, title, detail); filled by test_acceptance.py
RESULTS = {}
