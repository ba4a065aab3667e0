def squares(n):
    def square(x):
        return x * x

    for i in range(n):
        yield square(i)


def total(n):
    return sum(squares(n))


print(total(4), [v for v in squares(2)])
