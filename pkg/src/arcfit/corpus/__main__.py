from . import generate

for p in generate():
    print(p)
