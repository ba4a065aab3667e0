def by_length_down(word):
    return -len(word)


def ordered(words):
    return sorted(words, key=by_length_down)


def report(words):
    for w in ordered(words):
        print(w)


report(["a", "ccc", "bb"])
