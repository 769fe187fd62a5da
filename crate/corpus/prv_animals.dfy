trait Animal {
  method Sound() returns (s: string)
}

class Dog extends Animal {
  constructor() {}
  method Sound() returns (s: string) { s := "woof"; }
}

class Cat extends Animal {
  constructor() {}
  method Sound() returns (s: string) { s := "meow"; }
}

class Cow extends Animal {
  constructor() {}
  method Sound() returns (s: string) { s := "moo"; }
}

method Main()
{
  var dog := new Dog();
  var cat := new Cat();
  var cow := new Cow();
  var pet: Animal := dog;
  pet := cat;
  var noise := pet.Sound();
  print noise, "\n";
}
